"""Mind changes, countdowns, duals and the c.e. set V_f of a trace."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from afalab.approx.trace import ABOVE, BELOW, ApproximationTrace
from afalab.errors import BoundViolation, CompletenessError, KindError
from afalab.pairing import pair, unpair
from afalab.reductions import QueryAudit, call_oracle

Bound = Mapping[int, int] | Callable[[int], int]


def _bound(h: Bound, x: int) -> int:
    return h[x] if isinstance(h, Mapping) else h(x)


def mind_changes(trace: ApproximationTrace, x: int, upto: int | None = None) -> int:
    """Number of stages s < upto with g(x, s) != g(x, s + 1); all of them if upto is None."""
    stages = trace.change_stages(x)
    if upto is None:
        return len(stages)
    return sum(1 for s in stages if s <= upto)


@dataclass(frozen=True)
class Classification:
    monotone_above: bool
    monotone_below: bool
    max_changes: int
    changes: dict[int, int]
    omega_bound: dict[int, int] | None

    def is_n_approximable(self, n: int) -> bool:
        return self.max_changes <= n


def classify(trace: ApproximationTrace) -> Classification:
    if not trace.complete:
        raise CompletenessError("classification needs a complete trace")
    above = below = True
    changes = {}
    for x in trace.domain:
        vals = trace.values(x)
        above &= all(b < a for a, b in zip(vals, vals[1:]))
        below &= all(b > a for a, b in zip(vals, vals[1:]))
        changes[x] = len(vals) - 1
    # h(x) = g(x, 0) bounds the changes of any approximation from above
    omega = {x: trace.first(x) for x in trace.domain} if above else None
    return Classification(above, below, max(changes.values(), default=0), changes, omega)


def countdown(trace: ApproximationTrace, h: Bound) -> ApproximationTrace:
    """c(x, 0) = h(x), decremented at every stage where g changes its mind."""
    events = {}
    for x in trace.domain:
        start = _bound(h, x)
        stages = trace.change_stages(x)
        if len(stages) > start:
            raise BoundViolation(f"input {x} changes {len(stages)} times, bound is {start}")
        events[x] = [(0, start)] + [(s, start - i) for i, s in enumerate(stages, 1)]
    return ApproximationTrace.from_events(events, ABOVE, trace.complete, trace.horizon)


def reconstruct_from_countdown(trace: ApproximationTrace, h: Bound, x: int,
                               oracle: Callable[[int], int]) -> tuple[int, QueryAudit]:
    """f(x) from the single oracle value lim_s c(x, s).

    Replays g, recomputing the countdown, and returns g(x, t) at the first t
    where the countdown reaches the announced limit.
    """
    target = call_oracle(oracle, x)
    audit = QueryAudit()
    audit.record(x, [x])
    start = _bound(h, x)
    for i, v in enumerate(trace.values(x)):
        if start - i == target:
            return v, audit
    raise CompletenessError(f"countdown for input {x} never reaches {target} within the trace")


def dual(trace: ApproximationTrace, bound: Bound | None = None) -> ApproximationTrace:
    """h(x, s) = g(x, 0) - g(x, s) for a from-above g.

    For a from-below trace a computable ``bound`` b is required and the
    result is the from-above b(x) - h(x, s).
    """
    if trace.kind == ABOVE:
        base = {x: trace.first(x) for x in trace.domain} if bound is None else {
            x: _bound(bound, x) for x in trace.domain}
        kind = BELOW
    elif trace.kind == BELOW:
        if bound is None:
            raise KindError("the dual of a from-below trace needs a computable bound")
        base = {x: _bound(bound, x) for x in trace.domain}
        kind = ABOVE
    else:
        raise KindError("dual is defined for monotone traces only")
    events = {}
    for x, evs in trace.events.items():
        if any(v > base[x] for _, v in evs):
            raise BoundViolation(f"input {x} exceeds the bound {base[x]}")
        events[x] = [(s, base[x] - v) for s, v in evs]
    return ApproximationTrace.from_events(events, kind, trace.complete, trace.horizon)


def v_membership(trace: ApproximationTrace, x: int, n: int) -> bool:
    """<x, n> in V_f, i.e. the approximation changes its mind more than n times."""
    if not trace.complete:
        raise CompletenessError("V_f membership needs a complete trace")
    return mind_changes(trace, x) > n


def v_set(trace: ApproximationTrace) -> set[int]:
    """The finite part of V_f visible on the trace's domain, as Cantor codes."""
    return {pair(x, n) for x in trace.domain for n in range(mind_changes(trace, x))}


def f_from_v(trace: ApproximationTrace, x: int, v_oracle: Callable[[int], int]) -> tuple[int, QueryAudit]:
    """Compute f(x) from a V_f oracle with the g(x, 0) queries <x, 0> .. <x, g(x,0)-1>."""
    if trace.kind != ABOVE:
        raise KindError("f_from_v needs a from-above trace")
    queries = [pair(x, n) for n in range(trace.first(x))]
    answers = [call_oracle(v_oracle, q) for q in queries]
    audit = QueryAudit()
    audit.record(x, queries)
    k = sum(1 for a in answers if a)
    vals = trace.values(x)
    if k >= len(vals):
        raise CompletenessError(f"trace for input {x} shows fewer than {k} changes")
    return vals[k], audit


def v_from_f(trace: ApproximationTrace, code: int, f_oracle: Callable[[int], int]) -> tuple[bool, QueryAudit]:
    """Decide <x, n> in V_f with the single query f(x)."""
    x, n = unpair(code)
    fx = call_oracle(f_oracle, x)
    audit = QueryAudit()
    audit.record(code, [x])
    vals = trace.values(x)
    if fx not in vals:
        raise CompletenessError(f"trace for input {x} never reaches the value {fx}")
    return vals.index(fx) > n, audit
