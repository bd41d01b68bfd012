"""JSON decode reports: plan, oracle traffic and a BFS cross-check per pair."""

from __future__ import annotations

from typing import Iterable

from afalab.distance import UNREACHED, bfs_from


def decode_entry(decoder, x: int, y: int, oracle, truth: float | None = None) -> dict:
    value, label, plan, audit = decoder.decode_labelled(x, y, oracle)
    entry = {
        "x": x, "y": y,
        "case": plan.case,
        "route": label,
        "candidates": plan.table(),
        "queries": [list(q) for q in plan.queries],
        "value": value,
    }
    if truth is not None:
        entry["bfs"] = None if truth == UNREACHED else int(truth)
        entry["agrees"] = truth == value
    return entry


def decode_report(decoder, view, oracle, pairs: Iterable[tuple[int, int]], check: bool = True) -> dict:
    rows, by_source = [], {}
    for x, y in pairs:
        truth = None
        if check:
            if x not in by_source:
                by_source[x] = bfs_from(view, x)
            truth = by_source[x].get(y, UNREACHED)
        rows.append(decode_entry(decoder, x, y, oracle, truth))
    return {
        "decoder": type(decoder).__name__,
        "pairs": len(rows),
        "max_queries": max((len(r["queries"]) for r in rows), default=0),
        "all_agree": all(r.get("agrees", True) for r in rows),
        "decodes": rows,
    }
