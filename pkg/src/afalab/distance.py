"""Exact distances on snapshots and the stage-wise approximation from above.

UNREACHED (math.inf) stands for "no path yet"; it sits above every natural.
The first finite estimate of a pair is not counted as a mind change.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from afalab.errors import NodeError
from afalab.graphs.staged import GraphSnapshot, StagedGraph

UNREACHED = math.inf


def bfs_from(snap: GraphSnapshot, x: int) -> dict[int, int]:
    """Distances from x to every reachable node, frontier in ascending id."""
    if x not in snap:
        raise NodeError(f"node {x} is not in the snapshot")
    dist = {x: 0}
    queue = deque([x])
    while queue:
        z = queue.popleft()
        for w in snap.neighbors(z):
            if w not in dist:
                dist[w] = dist[z] + 1
                queue.append(w)
    return dist


def bfs_distance(snap: GraphSnapshot, x: int, y: int) -> float:
    if y not in snap:
        raise NodeError(f"node {y} is not in the snapshot")
    return bfs_from(snap, x).get(y, UNREACHED)


def distance_matrix(snap: GraphSnapshot) -> tuple[tuple[int, ...], np.ndarray]:
    """All-pairs distances (inf where unreachable), rows and columns in node-id order."""
    m = shortest_path(snap.to_csr(), method="D", directed=snap.directed, unweighted=True)
    return snap.nodes, m


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    stage: int
    changes_so_far: int


def estimate_timeline(g: StagedGraph, x: int, y: int, upto: int | None = None) -> list[tuple[int, float]]:
    """(stage, estimate) at every stage where the estimate moves, starting at stage 0."""
    upto = g.last_stage if upto is None else upto
    out: list[tuple[int, float]] = []
    for s in [0] + [t for t in g.event_stages() if 0 < t <= upto]:
        snap = g.snapshot(s)
        val = bfs_distance(snap, x, y) if x in snap and y in snap else UNREACHED
        if not out or val < out[-1][1]:
            out.append((s, val))
    return out


def approx_distance(g: StagedGraph, x: int, y: int, s: int) -> DistanceEstimate:
    """g(x, y, s): the least path length found in G_0, ..., G_s.

    Snapshots are nested, so this is BFS on G_s; the timeline is kept to
    count changes.
    """
    for z in (x, y):
        if not 0 <= z < g.n_nodes or g.node_stage[z] > s:
            raise NodeError(f"node {z} is not present at stage {s}")
    timeline = estimate_timeline(g, x, y, s)
    changes = sum(1 for (_, a), (_, b) in zip(timeline, timeline[1:]) if a != UNREACHED and b < a)
    return DistanceEstimate(timeline[-1][1], s, changes)


@dataclass
class MindChangeAudit:
    nodes: tuple[int, ...]
    counts: np.ndarray            # per-pair strict decreases after first connection
    upto: int
    stages: list[int]
    estimate: np.ndarray | None = None    # the approximation at stage upto
    from_above: bool = True               # no snapshot ever undercut the stage-upto distance

    @property
    def max_changes(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0

    def count(self, x: int, y: int) -> int:
        idx = {z: i for i, z in enumerate(self.nodes)}
        return int(self.counts[idx[x], idx[y]])

    def argmax(self) -> tuple[int, int]:
        i, j = np.unravel_index(int(np.argmax(self.counts)), self.counts.shape)
        return self.nodes[i], self.nodes[j]

    def to_dict(self, pairs: Iterable[tuple[int, int]] | None = None) -> dict:
        if pairs is None:
            pairs = [self.argmax()] if self.counts.size else []
        return {
            "first_connection_counts_as_change": False,
            "upto": self.upto,
            "stages": self.stages,
            "max_changes": self.max_changes,
            "pairs": [{"x": x, "y": y, "changes": self.count(x, y)} for x, y in pairs],
        }


def mind_change_audit(g: StagedGraph, pairs: Sequence[tuple[int, int]] | None = None,
                      upto: int | None = None) -> MindChangeAudit:
    """Count strict decreases of the estimate for every pair over stages 0..upto.

    All pairs of nodes present by ``upto`` are audited at once with one
    all-pairs matrix per event stage; ``pairs`` narrows the reported set
    (counts outside it are zeroed).
    """
    upto = g.last_stage if upto is None else upto
    stages = [0] + [t for t in g.event_stages() if 0 < t <= upto]
    nodes = tuple(x for x in range(g.n_nodes) if g.node_stage[x] <= upto)
    n = len(nodes)
    full = {z: i for i, z in enumerate(nodes)}
    prev = np.full((n, n), np.inf)
    counts = np.zeros((n, n), dtype=np.int64)
    final = _embedded(g.snapshot(upto), full, n)
    above = True
    for s in stages:
        cur = _embedded(g.snapshot(s), full, n)
        above &= bool((cur >= final).all())
        counts += (cur < prev) & np.isfinite(prev)
        prev = np.minimum(prev, cur)
    if pairs is not None:
        mask = np.zeros_like(counts, dtype=bool)
        for x, y in pairs:
            mask[full[x], full[y]] = True
        counts = np.where(mask, counts, 0)
    return MindChangeAudit(nodes, counts, upto, stages, prev, above)


def _embedded(snap: GraphSnapshot, full: dict[int, int], n: int) -> np.ndarray:
    _, m = distance_matrix(snap)
    pos = np.array([full[z] for z in snap.nodes], dtype=np.int64)
    cur = np.full((n, n), np.inf)
    cur[np.ix_(pos, pos)] = m
    return cur


# unit drops and minima

def is_unit_drop(seq: Sequence[int]) -> bool:
    """g(s) - 1 <= g(s + 1) <= g(s) throughout."""
    return all(b in (a, a - 1) for a, b in zip(seq, seq[1:]))


def min_changes(g: Sequence[int], h: Sequence[int], c: int = 0, d: int = 0) -> int:
    """Number of s with min(g(s+1)+c, h(s+1)+d) < min(g(s)+c, h(s)+d)."""
    m = [min(a + c, b + d) for a, b in zip(g, h)]
    return sum(1 for a, b in zip(m, m[1:]) if b < a)


def unit_drop_sequences(n: int, length: int) -> list[tuple[int, ...]]:
    """Every sequence of ``length`` values starting at n that never drops by more than 1 or below 0."""
    out = []
    for steps in product((0, 1), repeat=length - 1):
        seq = [n]
        for st in steps:
            seq.append(seq[-1] - st)
        if seq[-1] >= 0:
            out.append(tuple(seq))
    return out
