"""The restricted distance oracle d|S."""

from __future__ import annotations

from typing import Iterable

from afalab.errors import OracleDomainError


class OracleRefusal(OracleDomainError):
    """A query outside S."""


class SpokeOracle:
    """Answers d(a, b) for the endpoint pairs of S and nothing else; logs every call.

    Undirected distances are symmetric and which end counts as a depends on
    which center a decoder calls u, so (b, a) is accepted along with (a, b)
    unless ``symmetric`` is off.
    """

    def __init__(self, answers: dict[tuple[int, int], int], symmetric: bool = True):
        self._answers = dict(answers)
        if symmetric:
            self._answers.update({(b, a): d for (a, b), d in answers.items()})
        self._pairs = sorted(answers)
        self.calls: list[tuple[int, int]] = []

    @classmethod
    def from_snapshot(cls, snap, pairs: Iterable[tuple[int, int]]) -> "SpokeOracle":
        from afalab.distance import bfs_from
        answers = {}
        for a, b in pairs:
            d = bfs_from(snap, a).get(b)
            if d is None:
                raise OracleDomainError(f"endpoint pair ({a}, {b}) is disconnected")
            answers[(a, b)] = d
        return cls(answers, symmetric=not snap.directed)

    @classmethod
    def from_graph(cls, g) -> "SpokeOracle":
        """Ground truth for a built graph, from its layout and final snapshot."""
        return cls.from_snapshot(g.final(), g.layout.endpoint_pairs())

    @property
    def domain(self) -> list[tuple[int, int]]:
        return list(self._pairs)

    def __call__(self, q):
        q = tuple(q)
        if q not in self._answers:
            raise OracleRefusal(f"({q[0]}, {q[1]}) is not an endpoint pair in S")
        self.calls.append(q)
        return self._answers[q]

    def reset(self) -> None:
        self.calls.clear()
