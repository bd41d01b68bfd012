"""Graph files, layout sidecars and DOT export.

Graph file::

    directed=0 stage=<s> complete=1
    n <id> <stage>
    e <id> <id> <stage>        (a <from> <to> <stage> when directed)

The layout sidecar is JSON and lives in its own file so that nothing
reading the graph file can see the spoke roles.
"""

from __future__ import annotations

import json
from pathlib import Path

from afalab.errors import ParseError
from afalab.graphs.build import Layout
from afalab.graphs.staged import StagedGraph


def format_graph(g: StagedGraph) -> str:
    lines = [f"directed={int(g.directed)} stage={g.last_stage} complete={int(g.complete)}"]
    lines += [f"n {x} {s}" for x, s in enumerate(g.node_stage)]
    tag = "a" if g.directed else "e"
    lines += [f"{tag} {x} {y} {s}" for x, y, s in g.edges]
    return "\n".join(lines) + "\n"


def _header(line: str, path: str) -> dict[str, int]:
    fields = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(path, 1, f"malformed header field {tok!r}")
        try:
            fields[key] = int(val)
        except ValueError:
            raise ParseError(path, 1, f"header field {key} is not a natural") from None
    missing = {"directed", "stage", "complete"} - fields.keys()
    if missing:
        raise ParseError(path, 1, "header lacks " + ", ".join(sorted(missing)))
    return fields


def parse_graph(text: str, path: str = "<graph>") -> StagedGraph:
    lines = [(i, raw.split("#", 1)[0].split()) for i, raw in enumerate(text.splitlines(), 1)]
    lines = [(i, toks) for i, toks in lines if toks]
    if not lines:
        raise ParseError(path, 0, "empty graph file")
    head = _header(" ".join(lines[0][1]), path)
    g = StagedGraph(directed=bool(head["directed"]))
    edge_tag = "a" if g.directed else "e"
    for lineno, toks in lines[1:]:
        try:
            nums = [int(t) for t in toks[1:]]
            if toks[0] == "n" and len(nums) == 2:
                if nums[0] != g.n_nodes:
                    raise ValueError(f"node ids must be sequential, expected {g.n_nodes}")
                g.add_node(nums[1])
            elif toks[0] == edge_tag and len(nums) == 3:
                g.add_edge(*nums)
            else:
                raise ValueError(f"unrecognized record {' '.join(toks)!r}")
        except (ValueError, KeyError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise ParseError(path, lineno, msg) from None
    g.last_stage = max(g.last_stage, head["stage"])
    g.complete = bool(head["complete"])
    return g


def write_graph(g: StagedGraph, path: str | Path, layout_path: str | Path | None = None) -> None:
    Path(path).write_text(format_graph(g))
    if layout_path is not None and g.layout is not None:
        write_layout(g.layout, layout_path)


def read_graph(path: str | Path, layout_path: str | Path | None = None) -> StagedGraph:
    g = parse_graph(Path(path).read_text(), str(path))
    if layout_path is not None:
        g.layout = read_layout(layout_path)
    return g


def layout_path_for(graph_path: str | Path) -> Path:
    """Default sidecar location: ``<graph>.layout.json``."""
    p = Path(graph_path)
    return p.with_name(p.name + ".layout.json")


def write_layout(layout: Layout, path: str | Path) -> None:
    Path(path).write_text(json.dumps(layout.to_dict(), indent=2, sort_keys=True) + "\n")


def read_layout(path: str | Path) -> Layout:
    try:
        return Layout.from_dict(json.loads(Path(path).read_text()))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(str(path), 0, f"bad layout sidecar: {exc}") from None


_ROLE_COLORS = {"center": "red", "a": "orange", "b": "blue", "chain": "gray", "loop": "green",
                "return": "purple"}


def roles(layout: Layout) -> dict[int, str]:
    out = {x: "center" for x in layout.centers.values()}
    for sp in layout.spokes:
        if sp.a is not None:
            out[sp.a] = "a"
        out[sp.b] = "b"
        for x in sp.chain_u + sp.chain_v:
            out[x] = "chain"
        for x in sp.loop:
            out[x] = "loop"
        for x in sp.ret:
            out[x] = "return"
    return out


def to_dot(g: StagedGraph, layout: Layout | None = None) -> str:
    """DOT text; colors come from the layout and are labelled as non-oracle data."""
    kind, op = ("digraph", "->") if g.directed else ("graph", "--")
    lines = [f"{kind} G {{"]
    if layout is not None:
        lines.append('  // node colors: spoke roles from the layout sidecar (not oracle data)')
        role = roles(layout)
        for x in range(g.n_nodes):
            r = role.get(x)
            attrs = f' [color={_ROLE_COLORS[r]}, role="{r}"]' if r else ""
            lines.append(f"  {x}{attrs};")
    else:
        lines += [f"  {x};" for x in range(g.n_nodes)]
    lines += [f"  {x} {op} {y};" for x, y, _ in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
