"""Distance decoders for standard and elongated spoke graphs.

Each decoder reads the graph through adjacency only, places every node
once, and for a pair (x, y) writes down a plan: the candidate route
lengths as linear forms in d(a_x, b_x) and d(a_y, b_y).  Only then does it
ask the spoke oracle those (at most two) values.

Elongated pairs with both nodes on a-b paths use the thirteen routes P0-P12;
chain nodes, centers and loops reduce to the ends of their strand.
"""

from __future__ import annotations

import weakref

from afalab.decoders.oracle import SpokeOracle
from afalab.decoders.plans import Plan, make_plan, run_plan
from afalab.decoders.structure import (
    ELONGATED, INF, STANDARD, Adjacency, EndpointReport, Position, SpokeStructure, analyze,
    certify_centers, endpoint_report,
)
from afalab.errors import CompletenessError, StructureError
from afalab.reductions import QueryAudit, TruthTableReduction

Row = tuple[float, int, int, str]


def _shift(rows: list[Row], by: float, tag: str) -> list[Row]:
    return [(c + by, cx, cy, f"{tag}{lab}") for c, cx, cy, lab in rows]


def _flip(rows: list[Row]) -> list[Row]:
    return [(c, cy, cx, lab) for c, cx, cy, lab in rows]


class _SpokeDecoder:
    shape = ""

    def __init__(self, view: Adjacency, structure: SpokeStructure):
        self.view = view
        self.st = structure
        self.pos = structure.positions

    # generic reductions shared by both shapes

    def _rows(self, p: Position, q: Position) -> list[Row]:
        if p.node == q.node:
            return [(0, 0, 0, "same node")]
        if q.kind == "chain":
            out = []
            if p.kind == "chain" and p.hub == q.hub:
                out.append((abs(p.k - q.k), 0, 0, "along chain"))
            out += _shift(self._rows(p, self.pos[q.hub]), q.k, "y->hub; ")
            out += _shift(self._rows(p, self.pos[q.center]), q.l - q.k, "y->center; ")
            return out
        if p.kind == "chain":
            return _flip(self._rows(q, p))
        if q.kind == "loop":
            out = []
            if p.kind == "loop" and p.strand == q.strand:
                gap = abs(p.k - q.k)
                out.append((min(gap, q.cycle - gap), 0, 0, "around loop"))
            off = min(q.k, q.cycle - q.k)
            out += _shift(self._rows(p, self.pos[q.hub]), off, "y->a; ")
            return out
        if p.kind == "loop":
            return _flip(self._rows(q, p))
        if p.kind == "center" and q.kind == "center":
            return [(self.duv, 0, 0, "u-v")]
        if p.kind == "center":
            return [(c, 0, k, lab) for c, k, lab in self._from_center(p.node, q)]
        if q.kind == "center":
            return [(c, k, 0, lab) for c, k, lab in self._from_center(q.node, p)]
        return self._between(p, q)

    def _case(self, p: Position, q: Position) -> str:
        raise NotImplementedError

    def plan(self, x: int, y: int) -> Plan:
        p, q = self.st.position(x), self.st.position(y)
        rows = self._rows(p, q)
        return make_plan(x, y, self._case(p, q), rows, p.spoke, q.spoke)

    def decode(self, x: int, y: int, oracle) -> tuple[int, QueryAudit]:
        value, _, audit = run_plan(self.plan(x, y), oracle)
        return value, audit

    def decode_labelled(self, x: int, y: int, oracle) -> tuple[int, str, Plan, QueryAudit]:
        plan = self.plan(x, y)
        value, label, audit = run_plan(plan, oracle)
        return value, label, plan, audit

    def reduction(self, norm: int = 2) -> TruthTableReduction:
        """The decoder as a btt reduction from d to d|S on pairs (x, y)."""
        return TruthTableReduction(
            selector=lambda xy: list(self.plan(*xy).queries),
            evaluator=lambda xy, answers: self.plan(*xy).evaluate(answers)[0],
            norm=norm, name=f"{self.shape}-decoder", domain="node pairs", codomain="S")

    def locate(self, x: int) -> EndpointReport:
        return endpoint_report(self.st, x)


class StandardDecoder(_SpokeDecoder):
    """One center u; every spoke's a is adjacent to u."""

    shape = STANDARD
    duv = INF

    def __init__(self, view: Adjacency):
        super().__init__(view, analyze(view, STANDARD))
        self.u = self.st.u

    def _from_center(self, u: int, q: Position):
        out = []
        if q.xa < INF:
            out.append((1 + q.xa, 0, "u->a->y"))
        if q.xb < INF:
            out.append((1 + q.xb, 1, "u->a->b->y"))
        return out

    def _between(self, p: Position, q: Position) -> list[Row]:
        xa, xb, ya, yb = p.xa, p.xb, q.xa, q.xb
        if p.a != q.a:
            return [(xa + 1 + 1 + ya, 0, 0, "x->a->u->a->y"),
                    (xa + 1 + 1 + yb, 0, 1, "x->a->u->a->b->y"),
                    (xb + 1 + 1 + ya, 1, 0, "x->b->a->u->a->y"),
                    (xb + 1 + 1 + yb, 1, 1, "x->b->a->u->a->b->y")]
        if p.strand is not None and p.strand == q.strand:
            return [(abs(xa - ya), 0, 0, "along path"),
                    (xa + yb, 1, 0, "x->a->b->y"),
                    (xb + ya, 1, 0, "x->b->a->y")]
        return [(xa + ya, 0, 0, "x->a->y"), (xb + yb, 0, 0, "x->b->y"),
                (xa + yb, 1, 0, "x->a->b->y"), (xb + ya, 1, 0, "x->b->a->y")]

    def _case(self, p: Position, q: Position) -> str:
        if p.node == q.node:
            return "same node"
        if "center" in (p.kind, q.kind) or p.a != q.a:
            return "case 3"
        if p.kind == q.kind == "between" and p.strand is not None and p.strand == q.strand:
            return "case 1"
        return "case 2"

    def loop_index(self, a: int) -> int:
        loops = self.st.loops.get(a)
        if loops is None:
            raise StructureError(f"node {a} is not the top hub of a spoke")
        if len(loops) != 1:
            raise StructureError(f"hub {a} carries {len(loops)} loops, expected exactly one")
        return len(loops[0]) + 1 - 3


class ElongatedDecoder(_SpokeDecoder):
    """Two centers u, v and elongation chains; d(u, v) is a certified constant."""

    shape = ELONGATED

    def __init__(self, view: Adjacency, duv: int | None = None, u_hint: int | None = None):
        if not getattr(view, "complete", True):
            raise CompletenessError("the elongated decoder needs a complete snapshot")
        if duv is None:
            cert = certify_centers(view, ELONGATED, u_hint)
            duv, u_hint = cert.duv, cert.u
        super().__init__(view, analyze(view, ELONGATED, u_hint))
        self.u, self.v, self.duv = self.st.u, self.st.v, duv

    def _from_center(self, c: int, q: Position):
        near, far = (q.xa, q.xb) if c == self.u else (q.xb, q.xa)
        out = []
        if near < INF:
            out.append((q.l + near, 0, "center->near hub->y"))
        if far < INF:
            out.append((q.l + far, 1, "center->near hub->far hub->y"))
            out.append((self.duv + q.l + far, 0, "center->other center->far hub->y"))
        return out

    def _between(self, p: Position, q: Position) -> list[Row]:
        xa, xb, ya, yb = p.xa, p.xb, q.xa, q.xb
        lx, ly, duv = p.l, q.l, self.duv
        rows = [
            (xa + lx + ly + ya, 0, 0, "P0"),
            (xa + lx + ly + yb, 0, 1, "P1"),
            (xa + lx + duv + ly + yb, 0, 0, "P2"),
            (xa + lx + ly + yb, 1, 0, "P3"),
            (xb + lx + ly + yb, 0, 0, "P4"),
            (xb + lx + ly + ya, 0, 1, "P5"),
            (xb + lx + duv + ly + ya, 0, 0, "P6"),
            (xb + lx + ly + ya, 1, 0, "P7"),
        ]
        if p.a == q.a:
            rows += [(xa + ya, 0, 0, "P8"), (xb + yb, 0, 0, "P9"),
                     (xa + yb, 1, 0, "P10"), (xb + ya, 1, 0, "P11")]
            if p.strand is not None and p.strand == q.strand:
                rows.append((abs(xa - ya), 0, 0, "P12"))
        return rows

    def _case(self, p: Position, q: Position) -> str:
        if p.node == q.node:
            return "same node"
        if p.kind == q.kind == "between":
            return "same spoke" if p.a == q.a else "distinct spokes"
        if "center" in (p.kind, q.kind):
            return "center"
        return "elongation"


# module-level entry points with per-snapshot caches

_standard_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()
_elongated_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def standard_decoder(view: Adjacency) -> StandardDecoder:
    dec = _standard_cache.get(view)
    if dec is None:
        dec = _standard_cache[view] = StandardDecoder(view)
    return dec


def elongated_decoder(view: Adjacency, duv: int | None = None, u_hint: int | None = None) -> ElongatedDecoder:
    key = (duv, u_hint)
    per_view = _elongated_cache.setdefault(view, {})
    if key not in per_view:
        per_view[key] = ElongatedDecoder(view, duv, u_hint)
    return per_view[key]


def locate_endpoints_standard(view: Adjacency, x: int) -> EndpointReport:
    return standard_decoder(view).locate(x)


def locate_endpoints_elongated(view: Adjacency, x: int, u_hint: int | None = None) -> EndpointReport:
    return elongated_decoder(view, None, u_hint).locate(x)


def decode_standard(view: Adjacency, so: SpokeOracle, x: int, y: int) -> tuple[int, QueryAudit]:
    return standard_decoder(view).decode(x, y, so)


def decode_elongated(view: Adjacency, so: SpokeOracle, duv: int, x: int, y: int,
                     u_hint: int | None = None) -> tuple[int, QueryAudit]:
    return elongated_decoder(view, duv, u_hint).decode(x, y, so)


def loop_index(view: Adjacency, a: int) -> int:
    """n for the loop of n + 3 nodes hanging at a."""
    return standard_decoder(view).loop_index(a)
