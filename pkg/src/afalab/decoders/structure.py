"""Structural analysis of undirected spoke graphs through adjacency alone.

A *strand* is a maximal run of degree-2 nodes leaving a node.  A *hub* is
a node with at least three equal-length strands to one common mate: the
a and b nodes of a spoke.  Loops (strands back to the hub itself) and the
lone remaining strand (towards a center) are told apart the same way.
Nothing here looks at a layout; the only inputs are ``nodes``,
``neighbors`` and ``degree``.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from afalab.errors import CenterError, NodeError, StructureError

INF = math.inf

STANDARD = "standard"
ELONGATED = "elongated"


class Adjacency(Protocol):
    @property
    def nodes(self) -> Sequence[int]: ...

    def neighbors(self, x: int) -> Sequence[int]: ...

    def degree(self, x: int) -> int: ...


def walk_strand(view: Adjacency, start: int, first: int) -> tuple[int, list[int]]:
    """Follow degree-2 nodes from ``start`` through ``first``; returns (end, interior)."""
    prev, cur = start, first
    interior = []
    while cur != start and view.degree(cur) == 2:
        interior.append(cur)
        n1, n2 = view.neighbors(cur)
        prev, cur = cur, (n2 if n1 == prev else n1)
    return cur, interior


@dataclass
class Hub:
    node: int
    mate: int
    triple: int                       # length of the three equal strands: 2 + sigma(0)
    paths: list[list[int]]            # interior ids of every strand to the mate
    loops: list[list[int]]            # strands returning to the hub
    others: list[tuple[int, list[int]]]   # (end, interior) of the remaining strands


def find_hubs(view: Adjacency) -> dict[int, Hub]:
    hubs = {}
    for x in view.nodes:
        if view.degree(x) < 3:
            continue
        groups: dict[tuple[int, int], list[list[int]]] = defaultdict(list)
        by_end: dict[int, list[list[int]]] = defaultdict(list)
        loops: dict[frozenset, list[int]] = {}
        others = []
        for w in view.neighbors(x):
            end, interior = walk_strand(view, x, w)
            if end == x:
                loops.setdefault(frozenset(interior), interior)
                continue
            groups[(end, len(interior) + 1)].append(interior)
            by_end[end].append(interior)
            others.append((end, interior))
        triples = [key for key, strands in groups.items() if len(strands) >= 3]
        if len(triples) != 1:
            continue
        mate, length = triples[0]
        rest = [(e, i) for e, i in others if e != mate]
        hubs[x] = Hub(x, mate, length, by_end[mate], list(loops.values()), rest)
    for h in hubs.values():
        if h.mate not in hubs or hubs[h.mate].mate != h.node:
            raise StructureError(f"hub {h.node} has no matching partner hub")
    return hubs


@dataclass(frozen=True, slots=True)
class Position:
    """Where a node sits, as far as adjacency reveals.

    kind is "center", "between" (on an a-b path, a and b included), "chain"
    (elongation path) or "loop".  ``xa``/``xb`` are along-path offsets d'
    to a and b (INF when the node is the other hub); ``strand`` names the
    path; ``hub``/``center``/``k`` describe a chain node at distance k from
    its hub; ``k``/``cycle`` describe a loop node.
    """

    node: int
    kind: str
    a: int | None = None
    b: int | None = None
    l: int = 1
    xa: float = INF
    xb: float = INF
    strand: int | None = None
    hub: int | None = None
    center: int | None = None
    k: int = 0
    cycle: int = 0

    @property
    def spoke(self) -> tuple[int, int] | None:
        return None if self.a is None else (self.a, self.b)


@dataclass
class SpokeStructure:
    view: Adjacency
    shape: str
    u: int
    v: int | None
    spokes: list[tuple[int, int]]
    positions: dict[int, Position] = field(default_factory=dict)
    loops: dict[int, list[list[int]]] = field(default_factory=dict)

    def position(self, x: int) -> Position:
        try:
            return self.positions[x]
        except KeyError:
            raise NodeError(f"node {x} has no place in the spoke structure") from None


def _bfs_path(view: Adjacency, src: int, dst: int) -> list[int]:
    parent = {src: None}
    queue = deque([src])
    while queue:
        z = queue.popleft()
        if z == dst:
            break
        for w in view.neighbors(z):
            if w not in parent:
                parent[w] = z
                queue.append(w)
    if dst not in parent:
        raise StructureError(f"no path from {src} to {dst}")
    path = [dst]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


@dataclass(frozen=True)
class CenterCertificate:
    u: int
    v: int | None
    duv: int | None
    witness: tuple[int, int] | None     # (a, b) of the spoke a shortest u-v path runs through

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "duv": self.duv,
                "witness": None if self.witness is None else list(self.witness)}


def analyze(view: Adjacency, shape: str, u_hint: int | None = None) -> SpokeStructure:
    """Find centers, spokes and every node's position."""
    hubs = find_hubs(view)
    if not hubs:
        raise StructureError("no spoke found: no node has three equal strands to a common partner")
    if shape == STANDARD:
        return _analyze_standard(view, hubs)
    if shape == ELONGATED:
        return _analyze_elongated(view, hubs, u_hint)
    raise ValueError(f"unsupported shape {shape!r}")


def _place_paths(st: SpokeStructure, a: Hub, l: int) -> None:
    b = a.mate
    st.positions[a.node] = Position(a.node, "between", a.node, b, l, 0, INF)
    st.positions[b] = Position(b, "between", a.node, b, l, INF, 0)
    for interior in a.paths:
        n = len(interior) + 1
        for i, z in enumerate(interior, 1):
            st.positions[z] = Position(z, "between", a.node, b, l, i, n - i, interior[0])


def _analyze_standard(view: Adjacency, hubs: dict[int, Hub]) -> SpokeStructure:
    tops = [h for h in hubs.values() if h.others]
    centers = {interior[0] if interior else end for h in tops for end, interior in h.others}
    if len(centers) != 1 or any(len(h.others) != 1 for h in tops) or 2 * len(tops) != len(hubs):
        raise StructureError("standard graph needs exactly one center adjacent to every spoke's a")
    u = centers.pop()
    st = SpokeStructure(view, STANDARD, u, None, [])
    st.positions[u] = Position(u, "center")
    for a in sorted(tops, key=lambda h: h.node):
        st.spokes.append((a.node, a.mate))
        _place_paths(st, a, 1)
        st.loops[a.node] = a.loops
        for interior in a.loops:
            n = len(interior) + 1
            for i, z in enumerate(interior, 1):
                st.positions[z] = Position(z, "loop", a.node, a.mate, 1, strand=interior[0],
                                           hub=a.node, k=i, cycle=n)
    return st


def _chain_end(h: Hub) -> tuple[list[int], int]:
    """The first l - 1 nodes of h's remaining strand and the center l steps out."""
    if len(h.others) != 1:
        raise StructureError(f"hub {h.node} should have exactly one elongation path")
    end, interior = h.others[0]
    route = interior + [end]
    if len(route) < h.triple:
        raise StructureError(f"elongation path at hub {h.node} is shorter than {h.triple}")
    return route[: h.triple - 1], route[h.triple - 1]


def _analyze_elongated(view: Adjacency, hubs: dict[int, Hub], u_hint: int | None) -> SpokeStructure:
    reach = {h.node: _chain_end(h) for h in hubs.values()}
    centers = sorted({c for _, c in reach.values()})
    if len(centers) != 2:
        raise StructureError(f"elongated graph needs two centers, found {len(centers)}")
    if u_hint is not None and u_hint not in centers:
        raise StructureError(f"hinted top center {u_hint} is not a center")
    u = centers[0] if u_hint is None else u_hint
    v = centers[1] if u == centers[0] else centers[0]
    st = SpokeStructure(view, ELONGATED, u, v, [])
    st.positions[u] = Position(u, "center")
    st.positions[v] = Position(v, "center")
    for h in sorted(hubs.values(), key=lambda h: h.node):
        if reach[h.node][1] != u:
            continue
        b = hubs[h.mate]
        if reach[b.node][1] != v:
            raise StructureError(f"spoke at {h.node} does not reach both centers")
        l = h.triple
        st.spokes.append((h.node, b.node))
        _place_paths(st, h, l)
        for hub, center in ((h, u), (b, v)):
            chain, _ = reach[hub.node]
            for k, z in enumerate(chain, 1):
                st.positions[z] = Position(z, "chain", h.node, b.node, l, hub=hub.node, center=center, k=k)
    if 2 * len(st.spokes) != len(hubs):
        raise StructureError("some hubs do not belong to a u-v spoke")
    return st


def certify_centers(view: Adjacency, shape: str, u_hint: int | None = None) -> CenterCertificate:
    """Centers plus, when elongated, d(u, v) and the spoke a shortest u-v path uses.

    d(u, v) is computed once by BFS over the snapshot; the decoder then uses
    it as a fixed constant.
    """
    st = analyze(view, shape, u_hint)
    if st.v is None:
        return CenterCertificate(st.u, None, None, None)
    path = _bfs_path(view, st.u, st.v)
    witness = None
    for z in path:
        p = st.positions.get(z)
        if p is not None and p.a is not None:
            witness = p.spoke
            break
    return CenterCertificate(st.u, st.v, len(path) - 1, witness)


@dataclass(frozen=True)
class EndpointReport:
    a: int
    b: int
    position: str                 # above_a, between, below_b, loop
    l: int | None = None

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "position": self.position, "l": self.l}


def endpoint_report(st: SpokeStructure, x: int) -> EndpointReport:
    p = st.position(x)
    if p.kind == "center":
        raise CenterError(f"node {x} is a center and lies on no spoke")
    l = p.l if st.shape == ELONGATED else None
    if p.kind == "chain":
        return EndpointReport(p.a, p.b, "above_a" if p.hub == p.a else "below_b", l)
    return EndpointReport(p.a, p.b, p.kind, l)
