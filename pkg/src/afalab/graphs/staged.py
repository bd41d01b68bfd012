"""Append-only stage-wise graph presentations and their frozen snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np
from scipy.sparse import csr_matrix

from afalab.errors import NodeError


class GraphSnapshot:
    """The finite graph G_s: all nodes and edges added at stages <= s.

    Carries adjacency only.  This is the interface decoders see.
    """

    def __init__(self, nodes: Iterable[int], edges: Iterable[tuple[int, int]], directed: bool,
                 stage: int, complete: bool):
        self.directed = directed
        self.stage = stage
        self.complete = complete
        self._nodes = tuple(sorted(nodes))
        succ: dict[int, set[int]] = {x: set() for x in self._nodes}
        pred: dict[int, set[int]] = {x: set() for x in self._nodes} if directed else succ
        edge_list = []
        for x, y in edges:
            if x not in succ or y not in succ:
                raise NodeError(f"edge ({x}, {y}) touches a node outside the snapshot")
            succ[x].add(y)
            pred[y].add(x)
            edge_list.append((x, y))
        self._edges = tuple(edge_list)
        self._succ = {x: tuple(sorted(ns)) for x, ns in succ.items()}
        self._pred = {x: tuple(sorted(ns)) for x, ns in pred.items()} if directed else self._succ

    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    def __contains__(self, x) -> bool:
        return x in self._succ

    def __len__(self):
        return len(self._nodes)

    def _check(self, x):
        if x not in self._succ:
            raise NodeError(f"node {x} is not in the snapshot at stage {self.stage}")

    def neighbors(self, x: int) -> tuple[int, ...]:
        """Out-neighbors for directed graphs, ascending id."""
        self._check(x)
        return self._succ[x]

    successors = neighbors

    def predecessors(self, x: int) -> tuple[int, ...]:
        self._check(x)
        return self._pred[x]

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def out_degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def in_degree(self, x: int) -> int:
        return len(self.predecessors(x))

    def has_edge(self, x: int, y: int) -> bool:
        self._check(x)
        return y in self._succ[x]

    def index(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self._nodes)}

    def to_csr(self) -> csr_matrix:
        """Adjacency matrix in node-id order (row -> column arcs)."""
        idx = self.index()
        n = len(self._nodes)
        rows, cols = [], []
        for x, y in self._edges:
            rows.append(idx[x])
            cols.append(idx[y])
            if not self.directed:
                rows.append(idx[y])
                cols.append(idx[x])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(n, n))


@dataclass
class StagedGraph:
    """Event log of node and edge additions, never removals.

    ``layout`` records which ids play which role in which spoke.  It is
    ground truth for the harness and is never handed to a decoder.
    """

    directed: bool = False
    node_stage: list[int] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    layout: Any = None
    complete: bool = True
    last_stage: int = 0
    isomorphism: dict[int, int] | None = None

    def add_node(self, stage: int) -> int:
        self._advance(stage)
        self.node_stage.append(stage)
        return len(self.node_stage) - 1

    def add_edge(self, x: int, y: int, stage: int) -> None:
        self._advance(stage)
        for z in (x, y):
            if not 0 <= z < len(self.node_stage) or self.node_stage[z] > stage:
                raise NodeError(f"node {z} does not exist at stage {stage}")
        if x == y:
            raise ValueError("self-loops are not allowed")
        self.edges.append((x, y, stage))

    def add_path(self, start: int, end: int, length: int, stage: int) -> list[int]:
        """Join start to end by a fresh path of ``length`` edges; returns the interior ids in order."""
        if length < 1:
            raise ValueError("path length must be positive")
        interior = [self.add_node(stage) for _ in range(length - 1)]
        chain = [start, *interior, end]
        for x, y in zip(chain, chain[1:]):
            self.add_edge(x, y, stage)
        return interior

    def _advance(self, stage: int) -> None:
        if stage < 0:
            raise ValueError("stages are naturals")
        self.last_stage = max(self.last_stage, stage)

    @property
    def n_nodes(self) -> int:
        return len(self.node_stage)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def event_stages(self) -> list[int]:
        """Distinct stages at which something was added."""
        return sorted(set(self.node_stage) | {s for *_, s in self.edges})

    def snapshot(self, s: int | None = None) -> GraphSnapshot:
        s = self.last_stage if s is None else s
        nodes = [x for x, st in enumerate(self.node_stage) if st <= s]
        edges = [(x, y) for x, y, st in self.edges if st <= s]
        return GraphSnapshot(nodes, edges, self.directed, s, self.complete and s >= self.last_stage)

    def final(self) -> GraphSnapshot:
        return self.snapshot(self.last_stage)
