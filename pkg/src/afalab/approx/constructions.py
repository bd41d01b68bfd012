"""Stage constructions run against a finite process registry.

The 1-complete approximable-from-above function and three diagonal
witnesses.  Every "for all phi_e" in the underlying arguments becomes "for
every registry member"; results are stated for that scope only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from afalab.approx.processes import Registry, StepProcess
from afalab.approx.trace import ABOVE, BELOW, ApproximationTrace
from afalab.errors import InputRangeError, KindError
from afalab.pairing import pair
from afalab.reductions import MReduction


@dataclass
class _Slot:
    e: int
    x: int
    t: int
    prev: int
    monotone: bool = True


@dataclass
class OneCompleteBuild:
    trace: ApproximationTrace
    slots: dict[tuple[int, int], int]
    registry: Registry
    stages: int
    frozen: set[int] = field(default_factory=set)

    def d(self, e: int) -> dict[int, int]:
        """The part of d_e: x -> n_<e,x> assigned within the budget."""
        return {x: n for (e2, x), n in sorted(self.slots.items()) if e2 == e}

    def reduction(self, e: int) -> MReduction:
        table = self.d(e)

        def g(x):
            if x not in table:
                raise InputRangeError(f"no slot for <{e}, {x}> within {self.stages} stages")
            return table[x]

        return MReduction(g, injective=True, name=f"d_{e}")


def one_complete_build(registry: Registry, stages: int, max_input: int | None = None) -> OneCompleteBuild:
    """Build f, 1-complete for the registry's approximations from above.

    Stage s + 1 gives a fresh slot n_k to the least pair k = <e, x> whose
    phi_{e,s}(x, 0) has converged, then every earlier slot copies its
    rival's latest value while the rival's sequence stays nonincreasing and
    freezes for good once it rises.  Pairs are searched with x <= max_input
    (default: the stage budget).
    """
    procs = {p.index: p for p in registry}
    max_input = stages if max_input is None else max_input
    slots: dict[tuple[int, int], int] = {}
    owner: list[_Slot] = []
    events: dict[int, list[tuple[int, int]]] = {}
    floor = {e: 0 for e in procs}

    def own(n: int, t: int) -> int:
        # tracking rivals read the construction's own approximation
        evs = events.get(n)
        if not evs:
            return 0
        return [v for st, v in evs if st <= t][-1]

    for s in range(stages):
        for n, slot in enumerate(owner):
            proc = procs[slot.e]
            while slot.t + 1 <= s:
                v = proc.run(slot.x, slot.t + 1, s, own)
                if v is None:
                    break
                if v > slot.prev:
                    slot.monotone = False
                slot.prev = v
                slot.t += 1
            current = events[n][-1][1]
            if slot.monotone and slot.prev != current:
                events[n].append((s + 1, slot.prev))
        best = None
        for e, proc in procs.items():
            while (e, floor[e]) in slots:
                floor[e] += 1
            x = floor[e]
            while x <= max_input:
                k = pair(e, x)
                if best is not None and k >= best[0]:
                    break
                if (e, x) not in slots and proc.run(x, 0, s, own) is not None:
                    best = (k, e, x)
                    break
                x += 1
        if best is not None:
            _, e, x = best
            v = procs[e].run(x, 0, s, own)
            n = len(owner)
            slots[(e, x)] = n
            owner.append(_Slot(e, x, 0, v))
            events[n] = [(0, v)]
    trace = ApproximationTrace.from_events(events, ABOVE, complete=False, horizon=stages)
    frozen = {n for n, slot in enumerate(owner) if not slot.monotone}
    return OneCompleteBuild(trace, slots, list(registry), stages, frozen)


# diagonal witnesses

NOCOLLAPSE = "nocollapse"
NO1COMPLETE_BELOW = "no1complete_below"
NO_MCOMPLETE_ABOVE = "no_mcomplete_above"
WITNESS_KINDS = (NOCOLLAPSE, NO1COMPLETE_BELOW, NO_MCOMPLETE_ABOVE)


def nocollapse_witness(n: int, registry: Registry, stages: int) -> ApproximationTrace:
    """An (n+1)-approximation from above that no registry member n-approximates.

    Input x is attacked by registry member x: whenever its latest value
    phi_{x,s}(x, t) equals g(x, s) > 0, g drops by one.
    """
    procs = {p.index: p for p in registry}
    values: dict[int, list[int]] = {x: [n + 1] for x in procs}

    def ctx(x, t):
        return values[x][t]

    progress = {x: (-1, None) for x in procs}
    for s in range(stages):
        for x, proc in procs.items():
            t, last = progress[x]
            while t + 1 <= s:
                v = proc.run(x, t + 1, s, ctx)
                if v is None:
                    break
                t, last = t + 1, v
            progress[x] = (t, last)
            cur = values[x][s]
            values[x].append(cur - 1 if last is not None and last == cur and cur > 0 else cur)
    return ApproximationTrace.from_sequences(values, ABOVE, complete=True)


def no_mcomplete_witness(f: ApproximationTrace, registry: Registry, stages: int) -> ApproximationTrace:
    """A function approximable from below that f fails to m-compute.

    When phi_e(e) converges to y_e at stage s, g(e, t) = f(y_e, s) + 1 for t >= s.
    """
    if f.kind != ABOVE:
        raise KindError("no_mcomplete_witness diagonalizes against a from-above trace")
    events = {}
    for proc in registry:
        e = proc.index
        events[e] = [(0, 0)]
        for s in range(stages + 1):
            y = proc.apply(e, s)
            if y is not None:
                events[e] = [(0, 0), (s, f.value(y, s) + 1)] if s > 0 else [(0, f.value(y, 0) + 1)]
                break
    return ApproximationTrace.from_events(events, BELOW, complete=f.complete, horizon=stages)


def no1complete_witness(g: ApproximationTrace, registry: Registry, inputs, stages: int) -> ApproximationTrace:
    """h(<e,x>, s+1) = 1 + g(phi_e(<e,x>), s+1) once phi_e(<e,x>) has converged, else 0."""
    if g.kind != BELOW:
        raise KindError("no1complete_witness diagonalizes against a from-below trace")
    events = {}
    for proc in registry:
        for x in inputs:
            k = pair(proc.index, x)
            seq = [0]
            for s in range(stages):
                y = proc.apply(k, s)
                seq.append(0 if y is None else 1 + g.value(y, s + 1))
            events[k] = list(enumerate(seq))
    return ApproximationTrace.from_events(events, BELOW, complete=g.complete, horizon=stages)


def diagonal_witness(kind: str, registry: Registry, stages: int, *, n: int | None = None,
                     trace: ApproximationTrace | None = None, inputs=None) -> ApproximationTrace:
    if kind == NOCOLLAPSE:
        if n is None:
            raise ValueError("nocollapse needs n")
        return nocollapse_witness(n, registry, stages)
    if kind == NO1COMPLETE_BELOW:
        if trace is None:
            raise ValueError("no1complete_below needs a from-below trace")
        return no1complete_witness(trace, registry, range(3) if inputs is None else inputs, stages)
    if kind == NO_MCOMPLETE_ABOVE:
        if trace is None:
            raise ValueError("no_mcomplete_above needs a from-above trace")
        return no_mcomplete_witness(trace, registry, stages)
    raise ValueError(f"unknown witness kind {kind!r}")


@dataclass(frozen=True)
class Defeat:
    e: int
    status: str          # "defeated", "vacuous" or "failed"
    detail: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status != "failed"


def _rival_values(proc: StepProcess, x: int, s: int, witness: ApproximationTrace) -> list[int]:
    return proc.prefix(x, s, lambda x_, t: witness.value(x_, t))


def check_defeats(kind: str, witness: ApproximationTrace, registry: Registry, stages: int, *,
                  n: int | None = None, trace: ApproximationTrace | None = None,
                  inputs=None) -> list[Defeat]:
    """Per registry member, whether the witness meets its requirement."""
    out = []
    for proc in registry:
        e = proc.index
        if kind == NOCOLLAPSE:
            rival = _rival_values(proc, e, stages - 1, witness)
            if not rival:
                out.append(Defeat(e, "vacuous", "rival never converges on (x, 0)"))
                continue
            changes = sum(1 for a, b in zip(rival, rival[1:]) if a != b)
            final = witness.value(e, stages)
            if rival[-1] != final:
                out.append(Defeat(e, "defeated", f"rival ends at {rival[-1]}, f(x) = {final}"))
            elif changes >= n + 1:
                out.append(Defeat(e, "defeated", f"rival matches f(x) = {final} only after {changes} changes"))
            else:
                out.append(Defeat(e, "failed", f"rival matches f(x) = {final} with {changes} changes"))
        elif kind == NO_MCOMPLETE_ABOVE:
            y = proc.apply(e, stages)
            if y is None:
                out.append(Defeat(e, "vacuous", "phi_e(e) diverges within the budget"))
                continue
            ge, fy = witness.value(e, stages), trace.limit(y)
            status = "defeated" if ge > fy else "failed"
            out.append(Defeat(e, status, f"g({e}) = {ge}, f(phi_e(e)) = f({y}) = {fy}"))
        elif kind == NO1COMPLETE_BELOW:
            for x in (range(3) if inputs is None else inputs):
                k = pair(e, x)
                y = proc.apply(k, stages - 1)
                if y is None:
                    out.append(Defeat(e, "vacuous", f"phi_e(<{e},{x}>) diverges within the budget"))
                    continue
                jk, fy = witness.value(k, stages), trace.limit(y)
                ok = jk == 1 + fy and jk != fy
                out.append(Defeat(e, "defeated" if ok else "failed",
                                  f"j(<{e},{x}>) = {jk}, f(phi_e(<{e},{x}>)) = f({y}) = {fy}"))
        else:
            raise ValueError(f"unknown witness kind {kind!r}")
    return out
