"""Stage-wise builders for spoke graphs.

Shapes:

* standard -- one center u; spoke a adjacent to u, a-b paths of length 2 + sigma(i),
  three of them at 2 + sigma(0).
* elongated -- centers u and v; chains u..a and v..b of length l = 2 + sigma(0).
* directed -- u is every spoke's top; u->b paths as above, plus a b->u return
  path of length 3 + sigma(0).
* singledegree -- standard, plus a cycle of n + 3 nodes through a_n.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from afalab.approx.calculus import countdown
from afalab.approx.trace import ABOVE, ApproximationTrace
from afalab.errors import KindError, MonotonicityError
from afalab.graphs.staged import StagedGraph
from afalab.graphs.strings import DecreasingString, FamilySpec

STANDARD = "standard"
ELONGATED = "elongated"
DIRECTED = "directed"
SINGLEDEGREE = "singledegree"
SHAPES = (STANDARD, ELONGATED, DIRECTED, SINGLEDEGREE)


@dataclass
class Spoke:
    index: int
    b: int
    a: int | None = None
    type: list[int] = field(default_factory=list)
    paths: list[list[int]] = field(default_factory=list)   # interior ids, a (or u) end first
    chain_u: list[int] = field(default_factory=list)       # interior ids, center end first
    chain_v: list[int] = field(default_factory=list)
    ret: list[int] = field(default_factory=list)           # b -> u interior ids
    loop: list[int] = field(default_factory=list)          # cycle through a, interior ids
    source: str = "family"
    input: int | None = None
    created: int = 0

    @property
    def l(self) -> int:
        return 2 + self.type[0]

    @property
    def d_ab(self) -> int:
        return 2 + self.type[-1]

    def node_ids(self) -> list[int]:
        ids = [self.b] if self.a is None else [self.a, self.b]
        for group in (self.paths, [self.chain_u, self.chain_v, self.ret, self.loop]):
            for part in group:
                ids.extend(part)
        return ids

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Layout:
    shape: str
    centers: dict[str, int]
    spokes: list[Spoke] = field(default_factory=list)
    family: str = ""

    @property
    def u(self) -> int:
        return self.centers["u"]

    @property
    def v(self) -> int | None:
        return self.centers.get("v")

    def spoke(self, index: int) -> Spoke:
        for sp in self.spokes:
            if sp.index == index:
                return sp
        raise KeyError(f"no spoke with index {index}")

    def trace_spokes(self) -> list[Spoke]:
        return [sp for sp in self.spokes if sp.source == "trace"]

    def spoke_of(self) -> dict[int, int]:
        """node id -> spoke index (centers excluded)."""
        return {x: sp.index for sp in self.spokes for x in sp.node_ids()}

    def endpoint_pairs(self) -> list[tuple[int, int]]:
        """The set S of (a, b) pairs; (u, b) for directed spokes."""
        return [((self.u if sp.a is None else sp.a), sp.b) for sp in self.spokes]

    def to_dict(self) -> dict:
        return {"shape": self.shape, "centers": dict(self.centers), "family": self.family,
                "spokes": [sp.to_dict() for sp in self.spokes]}

    @classmethod
    def from_dict(cls, data: dict) -> "Layout":
        return cls(data["shape"], {k: int(v) for k, v in data["centers"].items()},
                   [Spoke(**sp) for sp in data["spokes"]], data.get("family", ""))

    def relabel(self, iso: dict[int, int]) -> "Layout":
        def m(ids):
            return [iso[x] for x in ids]

        spokes = [Spoke(sp.index, iso[sp.b], None if sp.a is None else iso[sp.a], list(sp.type),
                        [m(p) for p in sp.paths], m(sp.chain_u), m(sp.chain_v), m(sp.ret), m(sp.loop),
                        sp.source, sp.input, sp.created) for sp in self.spokes]
        return Layout(self.shape, {k: iso[v] for k, v in self.centers.items()}, spokes, self.family)


def new_graph(shape: str) -> StagedGraph:
    """An empty graph holding just its centers, added at stage 0."""
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    g = StagedGraph(directed=shape == DIRECTED)
    centers = {"u": g.add_node(0)}
    if shape == ELONGATED:
        centers["v"] = g.add_node(0)
    g.layout = Layout(shape, centers)
    return g


def build_spoke(g: StagedGraph, sigma0: int, elongated: bool = False, directed: bool = False,
                stage: int = 0, index: int | None = None) -> Spoke:
    """Add a spoke of type <sigma0> to ``g`` at ``stage``."""
    if sigma0 < 0:
        raise ValueError("sigma0 must be a natural")
    lay: Layout = g.layout
    if directed != g.directed:
        raise ValueError("spoke direction does not match the graph")
    if elongated and lay.v is None:
        raise ValueError("elongated spokes need a graph with two centers")
    index = len(lay.spokes) if index is None else index
    u = lay.u
    length = 2 + sigma0
    if directed:
        b = g.add_node(stage)
        sp = Spoke(index, b, None, [sigma0], created=stage)
        sp.paths = [g.add_path(u, b, length, stage) for _ in range(3)]
        sp.ret = g.add_path(b, u, length + 1, stage)
    else:
        a = g.add_node(stage)
        b = g.add_node(stage)
        sp = Spoke(index, b, a, [sigma0], created=stage)
        if elongated:
            sp.chain_u = g.add_path(u, a, length, stage)
            sp.chain_v = g.add_path(lay.v, b, length, stage)
        else:
            g.add_edge(u, a, stage)
        sp.paths = [g.add_path(a, b, length, stage) for _ in range(3)]
    lay.spokes.append(sp)
    return sp


def extend_spoke(g: StagedGraph, spoke: Spoke, new_value: int, stage: int) -> None:
    """Add one a-b (u->b when directed) path of length 2 + new_value."""
    if new_value >= spoke.type[-1]:
        raise MonotonicityError(f"spoke {spoke.index} of type {spoke.type} cannot take {new_value}")
    start = g.layout.u if spoke.a is None else spoke.a
    spoke.paths.append(g.add_path(start, spoke.b, 2 + new_value, stage))
    spoke.type.append(new_value)


def add_loop(g: StagedGraph, spoke: Spoke, n: int, stage: int) -> None:
    """A cycle of n + 3 nodes through a, touching nothing else."""
    spoke.loop = g.add_path(spoke.a, spoke.a, n + 3, stage)


def _realize(g: StagedGraph, sigma: DecreasingString, shape: str, stage: int, index: int) -> Spoke:
    sp = build_spoke(g, sigma.first, shape == ELONGATED, shape == DIRECTED, stage, index)
    for v in sigma.values[1:]:
        extend_spoke(g, sp, v, stage)
    return sp


def _trace_rows(trace: ApproximationTrace, spec: FamilySpec | None) -> ApproximationTrace:
    if trace.kind != ABOVE:
        raise KindError("spoke graphs encode from-above traces only")
    if spec is not None and spec.uses_countdown():
        n = spec.n if spec.kind != "interleaved" else spec.base.n
        return countdown(trace, lambda x: n)
    return trace


def build_family(spec: FamilySpec | None, shape: str, trace: ApproximationTrace | None = None,
                 stages: int | None = None, loops: bool = False) -> StagedGraph:
    """Build the graph of type Gamma (family spokes) plus one spoke per trace input.

    Family spokes are computable and appear whole at stage 0.  The spoke
    for input x starts as <g(x, 0)> and gains a path at every stage <= ``stages``
    where g(x, .) drops.  With a periodic countdown family the countdown of
    the trace (bound n) is encoded instead of the trace itself.  Trace
    spokes take indices 0.. and family spokes follow, except for an
    interleaved family: input number i gets index 2i and family spoke j gets 2j + 1.
    """
    base_shape = STANDARD if shape == SINGLEDEGREE else shape
    g = new_graph(shape)
    g.layout.family = "" if spec is None else spec.describe()
    rows = None if trace is None else _trace_rows(trace, spec)
    inputs = [] if rows is None else list(rows.domain)
    family = [] if spec is None else spec.schedule()
    interleave = spec is not None and spec.kind == "interleaved"
    if stages is None:
        stages = 0 if rows is None else rows.horizon

    slots: list[tuple[int, str, object]] = []
    for i, x in enumerate(inputs):
        slots.append((2 * i if interleave else i, "trace", x))
    for j, sigma in enumerate(family):
        slots.append((2 * j + 1 if interleave else len(inputs) + j, "family", sigma))
    slots.sort(key=lambda t: t[0])

    trace_spokes = {}
    for index, source, item in slots:
        if source == "family":
            sp = _realize(g, item, base_shape, 0, index)
        else:
            sp = build_spoke(g, rows.first(item), base_shape == ELONGATED, base_shape == DIRECTED, 0, index)
            sp.source, sp.input = "trace", item
            trace_spokes[item] = sp
        if loops:
            add_loop(g, sp, index, 0)

    late = False
    if rows is not None:
        pending = sorted((s, x, v) for x in inputs for s, v in rows.events[x][1:])
        for s, x, v in pending:
            if s > stages:
                late = True
                continue
            extend_spoke(g, trace_spokes[x], v, s)
        late = late or not rows.complete
    g.last_stage = max(g.last_stage, stages)
    g.complete = not late
    return g


def build_singledegree(trace: ApproximationTrace, stages: int | None = None) -> StagedGraph:
    """Standard graph of the trace's compressed types, spoke n carrying a loop of n + 3 nodes.

    Spoke n encodes input n; the trace's domain must be 0..k.
    """
    if list(trace.domain) != list(range(len(trace.domain))):
        raise ValueError("singledegree builds index spokes by input, so the domain must be 0..k")
    return build_family(None, SINGLEDEGREE, trace, stages, loops=True)


def spoke_node_count(sigma, shape: str, loop_n: int | None = None) -> int:
    """Closed-form number of non-center nodes in a spoke of type sigma."""
    sigma = list(sigma)
    paths = 3 * (1 + sigma[0]) + sum(1 + s for s in sigma[1:])
    if shape == DIRECTED:
        return 1 + paths + 2 + sigma[0]
    count = 2 + paths
    if shape == ELONGATED:
        count += 2 * (1 + sigma[0])
    if loop_n is not None:
        count += loop_n + 2
    return count


def permuted_copy(g: StagedGraph, seed: int | None = None) -> StagedGraph:
    """An isomorphic presentation with fresh ids and shuffled same-stage event order.

    ``seed=None`` gives the identity relabeling.  The returned graph's
    ``isomorphism`` maps old ids to new ids; it and the relabeled layout are
    for the harness only.
    """
    rng = random.Random(seed)
    old = list(range(g.n_nodes))
    if seed is not None:
        old.sort(key=lambda x: (g.node_stage[x], rng.random()))
    iso = {x: i for i, x in enumerate(old)}
    h = StagedGraph(directed=g.directed)
    for x in old:
        h.add_node(g.node_stage[x])
    edges = list(g.edges)
    if seed is not None:
        edges.sort(key=lambda e: (e[2], rng.random()))
    for x, y, s in edges:
        x2, y2 = iso[x], iso[y]
        if seed is not None and not g.directed and rng.random() < 0.5:
            x2, y2 = y2, x2
        h.add_edge(x2, y2, s)
    h.last_stage = g.last_stage
    h.complete = g.complete
    h.layout = None if g.layout is None else g.layout.relabel(iso)
    h.isomorphism = iso
    return h
