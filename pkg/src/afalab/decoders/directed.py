"""Distance decoder for directed spoke graphs.

u is the one node with more than one out-arc.  Every other node has a
single way forward, so from x one walks until reaching y or u; only when
y is b_m or on b_m's return path does the decoder need d(u, b_m).
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

from afalab.decoders.oracle import SpokeOracle
from afalab.decoders.plans import Plan, make_plan, run_plan
from afalab.errors import NodeError, StructureError
from afalab.reductions import QueryAudit, TruthTableReduction


@dataclass(frozen=True, slots=True)
class DirectedPosition:
    node: int
    kind: str            # "center", "path" (u -> b), "bottom" or "return" (b -> u)
    b: int | None = None
    path: int | None = None
    j: int = 0           # path: arcs from u; return: arcs from b
    length: int = 0      # path: its length; return: return-path length


class DirectedDecoder:
    def __init__(self, view):
        self.view = view
        tops = [x for x in view.nodes if len(view.successors(x)) > 1]
        if len(tops) != 1:
            raise StructureError(f"expected exactly one node with out-degree > 1, found {len(tops)}")
        self.u = u = tops[0]
        self.pos: dict[int, DirectedPosition] = {u: DirectedPosition(u, "center")}
        self.bottoms = sorted(x for x in view.nodes if x != u and len(view.predecessors(x)) >= 3)
        for b in self.bottoms:
            self._place(b)
        missing = [x for x in view.nodes if x not in self.pos]
        if missing:
            raise StructureError(f"nodes {missing[:5]} lie on no directed spoke")

    def _place(self, b: int) -> None:
        view, u = self.view, self.u
        ret, cur = [], b
        while True:
            (nxt,) = view.successors(cur)
            if nxt == u:
                break
            ret.append(nxt)
            cur = nxt
        lengths = []
        for first in view.predecessors(b):
            back, cur = [], first
            while cur != u:
                back.append(cur)
                preds = view.predecessors(cur)
                if len(preds) != 1:
                    raise StructureError(f"node {cur} on a u->{b} path has {len(preds)} in-arcs")
                cur = preds[0]
            back.reverse()
            n = len(back) + 1
            lengths.append(n)
            for j, z in enumerate(back, 1):
                self.pos[z] = DirectedPosition(z, "path", b, back[0], j, n)
        top = max(lengths)
        if lengths.count(top) < 3:
            raise StructureError(f"bottom {b} lacks three equal longest paths from u")
        self.pos[b] = DirectedPosition(b, "bottom", b, None, 0, len(ret) + 1)
        for r, z in enumerate(ret, 1):
            self.pos[z] = DirectedPosition(z, "return", b, None, r, len(ret) + 1)

    def position(self, x: int) -> DirectedPosition:
        try:
            return self.pos[x]
        except KeyError:
            raise NodeError(f"node {x} is not in the graph") from None

    def _walk(self, p: DirectedPosition, q: DirectedPosition) -> tuple[int | None, int]:
        """(steps to y if y lies on x's forward walk else None, steps from x to u)."""
        if p.kind == "center":
            return None, 0
        if p.kind == "path":
            to_b = p.length - p.j
            to_u = to_b + self._ret_len(p.b)
            if q.kind == "path" and q.path == p.path and q.j > p.j:
                return q.j - p.j, to_u
            if q.b == p.b and q.kind in ("bottom", "return"):
                return to_b + q.j, to_u
            return None, to_u
        # bottom or return node: walk down the return path
        to_u = p.length - p.j
        if q.kind in ("bottom", "return") and q.b == p.b and q.j > p.j:
            return q.j - p.j, to_u
        return None, to_u

    def _ret_len(self, b: int) -> int:
        return self.pos[b].length

    def plan(self, x: int, y: int) -> Plan:
        p, q = self.position(x), self.position(y)
        if x == y:
            return make_plan(x, y, "same node", [(0, 0, 0, "same node")], None, None)
        hit, to_u = self._walk(p, q)
        if hit is not None:
            return make_plan(x, y, "walk", [(hit, 0, 0, "walk reaches y")], None, None)
        if q.kind == "center":
            return make_plan(x, y, "walk", [(to_u, 0, 0, "walk reaches u")], None, None)
        if q.kind == "path":
            return make_plan(x, y, "walk then path", [(to_u + q.j, 0, 0, "walk to u, path to y")], None, None)
        return make_plan(x, y, "walk then oracle", [(to_u + q.j, 0, 1, "walk to u, d(u,b), return to y")],
                         None, (self.u, q.b))

    def decode(self, x: int, y: int, oracle) -> tuple[int, QueryAudit]:
        value, _, audit = run_plan(self.plan(x, y), oracle)
        return value, audit

    def decode_labelled(self, x: int, y: int, oracle):
        plan = self.plan(x, y)
        value, label, audit = run_plan(plan, oracle)
        return value, label, plan, audit

    def reduction(self) -> TruthTableReduction:
        return TruthTableReduction(
            selector=lambda xy: list(self.plan(*xy).queries),
            evaluator=lambda xy, answers: self.plan(*xy).evaluate(answers)[0],
            norm=1, name="directed-decoder", domain="node pairs", codomain="S")


_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def directed_decoder(view) -> DirectedDecoder:
    dec = _cache.get(view)
    if dec is None:
        dec = _cache[view] = DirectedDecoder(view)
    return dec


def decode_directed(view, so: SpokeOracle, x: int, y: int) -> tuple[int, QueryAudit]:
    return directed_decoder(view).decode(x, y, so)
