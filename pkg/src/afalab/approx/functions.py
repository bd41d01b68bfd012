"""Partial functions as callables returning DIVERGE (None) where undefined."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Optional

from afalab.reductions import DIVERGE, evaluate

Partial = Callable[[int], Optional[int]]


def join(phi, psi) -> Partial:
    """(phi + psi)(2x) = phi(x), (phi + psi)(2x + 1) = psi(x)."""

    def joined(x: int):
        return evaluate(phi, x // 2) if x % 2 == 0 else evaluate(psi, (x - 1) // 2)

    return joined


def iota(x: int):
    """iota(0) diverges, iota(x + 1) = x."""
    return DIVERGE if x == 0 else x - 1


def empty(x: int):
    """The nowhere-defined function."""
    return DIVERGE


def augmented(psi) -> Partial:
    """iota + psi, the target of augmented m-reductions."""
    return join(iota, psi)


def table(f, domain: Iterable[int]) -> dict[int, Optional[int]]:
    """Tabulate ``f`` on ``domain`` with explicit divergence markers."""
    return {x: evaluate(f, x) for x in domain}


def from_table(rows: Mapping[int, Optional[int]]) -> Partial:
    return lambda x: rows.get(x, DIVERGE)
