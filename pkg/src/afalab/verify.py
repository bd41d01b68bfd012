"""Verification suites run over a built graph and its layout sidecar.

The layout is harness-side ground truth: it supplies the endpoint set S
for the spoke oracle and the hidden isomorphism checks, never the decoder.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from afalab.decoders import SpokeOracle, decoder_for
from afalab.decoders.directed import DirectedDecoder
from afalab.distance import UNREACHED, distance_matrix, mind_change_audit
from afalab.errors import LabError, StructureError
from afalab.graphs.build import DIRECTED, ELONGATED, SINGLEDEGREE
from afalab.graphs.staged import StagedGraph

SUITES = ("oracle-equivalence", "norms", "mind-changes", "metric", "equivariance")
MAX_FAILURES = 20


@dataclass
class SuiteResult:
    suite: str
    passed: bool = True
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    failure_count: int = 0
    notes: dict = field(default_factory=dict)

    def fail(self, **detail) -> None:
        self.passed = False
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(detail)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checked": self.checked,
                "failure_count": self.failure_count, "failures": self.failures, "notes": self.notes}


def _norm(shape: str) -> int:
    return 1 if shape == DIRECTED else 2


def _jsonnum(v):
    return None if v == UNREACHED else int(v)


def _setup(g: StagedGraph, res: SuiteResult, u_hint: int | None = None):
    """(snapshot, decoder, oracle), or None after recording why not."""
    snap = g.final()
    try:
        dec = decoder_for(snap, g.layout.shape, u_hint=u_hint)
        oracle = SpokeOracle.from_snapshot(snap, g.layout.endpoint_pairs())
    except LabError as exc:
        res.fail(pair=None, error=f"{type(exc).__name__}: {exc}")
        return None
    return snap, dec, oracle


def _pairs(nodes, limit: int | None, rng: random.Random):
    pairs = [(x, y) for x in nodes for y in nodes]
    if limit is not None and len(pairs) > limit:
        pairs = sorted(rng.sample(pairs, limit))
    return pairs


def oracle_equivalence(g: StagedGraph, pair_limit: int | None = None, seed: int = 0) -> SuiteResult:
    """Every decoded distance equals BFS."""
    res = SuiteResult("oracle-equivalence")
    setup = _setup(g, res)
    if setup is None:
        return res
    snap, dec, oracle = setup
    nodes, m = distance_matrix(snap)
    idx = {z: i for i, z in enumerate(nodes)}
    for x, y in _pairs(nodes, pair_limit, random.Random(seed)):
        res.checked += 1
        truth = m[idx[x], idx[y]]
        try:
            value, _ = dec.decode(x, y, oracle)
        except LabError as exc:
            res.fail(pair=[x, y], bfs=_jsonnum(truth), error=f"{type(exc).__name__}: {exc}")
            continue
        if value != truth:
            res.fail(pair=[x, y], bfs=_jsonnum(truth), decoded=int(value), case=dec.plan(x, y).case)
    return res


def norms(g: StagedGraph, pair_limit: int | None = None, seed: int = 0) -> SuiteResult:
    """Per-pair oracle use stays within the declared norm and inside S."""
    res = SuiteResult("norms")
    setup = _setup(g, res)
    if setup is None:
        return res
    snap, dec, oracle = setup
    bound = _norm(g.layout.shape)
    domain = set(oracle.domain)
    if not snap.directed:
        domain |= {(b, a) for a, b in domain}
    observed = 0
    for x, y in _pairs(snap.nodes, pair_limit, random.Random(seed)):
        res.checked += 1
        try:
            queries = dec.plan(x, y).queries
        except LabError as exc:
            res.fail(pair=[x, y], error=f"{type(exc).__name__}: {exc}")
            continue
        observed = max(observed, len(queries))
        if len(queries) > bound or any(q not in domain for q in queries):
            res.fail(pair=[x, y], queries=[list(q) for q in queries], norm=bound)
    # recovering f(m) = d(a_m, b_m) - 2 asks exactly the one pair of spoke m
    for pair_ in oracle.domain:
        oracle.reset()
        oracle(pair_)
        res.checked += 1
        if len(oracle.calls) != 1:
            res.fail(spoke=list(pair_), queries=len(oracle.calls), norm=1)
    res.notes = {"declared_norm": bound, "observed_max_queries": observed, "f_recovery_norm": 1}
    return res


def mind_changes(g: StagedGraph, bound: int | None = None) -> SuiteResult:
    """Estimate changes per pair, from-above discipline and terminal exactness."""
    res = SuiteResult("mind-changes")
    audit = mind_change_audit(g)
    n = len(audit.nodes)
    res.checked = n * n
    _, final = distance_matrix(g.snapshot(audit.upto))
    if not audit.from_above:
        res.fail(error="some snapshot distance fell below the final distance")
    if not np.array_equal(audit.estimate, final):
        bad = np.argwhere(audit.estimate != final)[0]
        x, y = audit.nodes[bad[0]], audit.nodes[bad[1]]
        res.fail(pair=[x, y], error="estimate at the last stage differs from BFS")
    worst = audit.argmax() if n else None
    res.notes = {"max_changes": audit.max_changes, "argmax": None if worst is None else list(worst),
                 "bound": bound, "stages": len(audit.stages),
                 "first_connection_counts_as_change": False}
    if bound is not None and audit.max_changes > bound:
        for i, j in np.argwhere(audit.counts > bound)[:MAX_FAILURES]:
            res.fail(pair=[audit.nodes[i], audit.nodes[j]], changes=int(audit.counts[i, j]), bound=bound)
    return res


def metric(g: StagedGraph) -> SuiteResult:
    """Metric axioms of BFS distance on the complete snapshot (skipped if disconnected)."""
    res = SuiteResult("metric")
    snap = g.final()
    nodes, m = distance_matrix(snap)
    n = len(nodes)
    if not np.isfinite(m).all():
        res.notes = {"skipped": "snapshot is not connected"}
        return res
    res.checked = n ** 3
    for i in np.flatnonzero(np.diag(m) != 0)[:MAX_FAILURES]:
        res.fail(axiom="d(x,x)=0", pair=[nodes[i], nodes[i]])
    off = m + np.eye(n)
    for i, j in np.argwhere(off == 0)[:MAX_FAILURES]:
        res.fail(axiom="d(x,y)>0 for x!=y", pair=[nodes[i], nodes[j]])
    if not snap.directed:
        for i, j in np.argwhere(m != m.T)[:MAX_FAILURES]:
            res.fail(axiom="symmetry", pair=[nodes[i], nodes[j]])
    for k in range(n):
        via = m[:, k, None] + m[None, k, :]
        bad = np.argwhere(via < m)
        for i, j in bad[: MAX_FAILURES - len(res.failures)]:
            res.fail(axiom="triangle", triple=[nodes[i], nodes[k], nodes[j]])
        if len(res.failures) >= MAX_FAILURES:
            break
    return res


def _locate_parts(dec, x):
    rep = dec.locate(x)
    return rep.a, rep.b, rep.position, rep.l


def equivariance(g: StagedGraph, copies: int = 3, seed: int = 0, pair_limit: int | None = None) -> SuiteResult:
    """Decoders, endpoint location and loop indices commute with a hidden relabeling."""
    from afalab.graphs.build import permuted_copy

    res = SuiteResult("equivariance")
    base = _setup(g, res)
    if base is None:
        return res
    snap, dec, oracle = base
    nodes, m = distance_matrix(snap)
    rng = random.Random(seed)
    pairs = _pairs(nodes, pair_limit, rng)
    directed = isinstance(dec, DirectedDecoder)
    for c in range(copies):
        h = permuted_copy(g, seed * 1000 + c + 1)
        iso = h.isomorphism
        hint = None if directed or g.layout.shape != ELONGATED else iso[dec.u]
        setup = _setup(h, res, u_hint=hint)
        if setup is None:
            continue
        hsnap, hdec, horacle = setup
        hnodes, hm = distance_matrix(hsnap)
        perm = np.array([hnodes.index(iso[z]) for z in nodes])
        res.checked += 1
        if not np.array_equal(hm[np.ix_(perm, perm)], m):
            i, j = np.argwhere(hm[np.ix_(perm, perm)] != m)[0]
            res.fail(copy=c, check="d_H(h(x), h(y)) = d(x, y)", pair=[nodes[i], nodes[j]])
        for x, y in pairs:
            res.checked += 1
            try:
                ours = dec.decode(x, y, oracle)[0]
                theirs = hdec.decode(iso[x], iso[y], horacle)[0]
            except LabError as exc:
                res.fail(copy=c, pair=[x, y], error=f"{type(exc).__name__}: {exc}")
                continue
            if ours != theirs:
                res.fail(copy=c, check="decode", pair=[x, y], original=ours, copy_value=theirs)
        if not directed:
            centers = {dec.u, getattr(dec, "v", None)}
            for x in nodes:
                if x in centers:
                    continue
                res.checked += 1
                a, b, pos, l = _locate_parts(dec, x)
                if _locate_parts(hdec, iso[x]) != (iso[a], iso[b], pos, l):
                    res.fail(copy=c, check="locate", node=x)
        if g.layout.shape == SINGLEDEGREE:
            for a in sorted(dec.st.loops):
                res.checked += 1
                try:
                    ok = hdec.loop_index(iso[a]) == dec.loop_index(a)
                except StructureError as exc:
                    res.fail(copy=c, check="loop_index", node=a, error=str(exc))
                    continue
                if not ok:
                    res.fail(copy=c, check="loop_index", node=a)
    res.notes = {"copies": copies, "seed": seed}
    return res


def run_suites(g: StagedGraph, suites, *, bound: int | None = None, seed: int = 0, copies: int = 3,
               pair_limit: int | None = None) -> dict:
    if g.layout is None:
        raise ValueError("verification needs the layout sidecar")
    runners = {
        "oracle-equivalence": lambda: oracle_equivalence(g, pair_limit, seed),
        "norms": lambda: norms(g, pair_limit, seed),
        "mind-changes": lambda: mind_changes(g, bound),
        "metric": lambda: metric(g),
        "equivariance": lambda: equivariance(g, copies, seed, pair_limit),
    }
    results = []
    for name in suites:
        if name not in runners:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        try:
            r = runners[name]()
        except LabError as exc:
            r = SuiteResult(name)
            r.fail(pair=None, error=f"{type(exc).__name__}: {exc}")
        results.append(r.to_dict())
    return {"shape": g.layout.shape, "nodes": g.n_nodes, "edges": g.n_edges,
            "complete": g.complete, "passed": all(r["passed"] for r in results), "suites": results}
