"""Sigma^0_2 sets as ranges of 2-approximable-from-above functions.

A stream presents S by naming, at each stage, the unique index y whose
c.e. set W_{p(y)} grows; y is in S iff W_{p(y)} is finite.  Desk-scale
streams are a finite prefix followed by an optional cycle repeated forever,
so the indices growing infinitely often are exactly the cycle's.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from afalab.approx.trace import ABOVE, ApproximationTrace
from afalab.errors import ParseError


@dataclass(frozen=True)
class Sigma2Stream:
    x0: int
    prefix: tuple[int, ...]
    cycle: tuple[int, ...] = ()
    p: Mapping[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if self.x0 < 0 or any(y < 0 for y in self.prefix + self.cycle):
            raise ValueError("stream indices must be naturals")

    @property
    def finite(self) -> bool:
        return not self.cycle

    def event(self, s: int) -> int | None:
        """The index whose set grows between stages s and s + 1."""
        if s < len(self.prefix):
            return self.prefix[s]
        if not self.cycle:
            return None
        return self.cycle[(s - len(self.prefix)) % len(self.cycle)]

    def label(self, y: int) -> int:
        return y if self.p is None else self.p[y]

    @property
    def indices(self) -> set[int]:
        return set(self.prefix) | set(self.cycle)

    @property
    def stabilizing(self) -> set[int]:
        """Indices whose sets stop growing: the members of S."""
        return set(self.prefix) - set(self.cycle)

    def well_formed(self) -> bool:
        """x0 is the least member of S."""
        members = self.stabilizing
        return self.x0 in members and min(members) == self.x0

    def recurs_after(self, y: int, stages: int) -> bool:
        """Whether W_{p(y)} grows again at some stage after ``stages``."""
        lab = self.label(y)
        if any(self.label(c) == lab for c in self.cycle):
            return True
        return any(self.label(c) == lab for c in self.prefix[stages:])

    def expected_range(self) -> set[int]:
        return {self.x0} | {y for y in self.stabilizing if y >= self.x0}


def range_encoder(stream: Sigma2Stream, stages: int) -> ApproximationTrace:
    """Run the encoder for ``stages`` stages.

    Stage s + 1 seeds input s with the growing index y (or x0 when y < x0)
    and resets to x0 every held input whose monitored set just grew.  Each
    input changes at most once.  The trace is complete when no held input
    can be reset later.
    """
    x0 = stream.x0
    events: dict[int, list[tuple[int, int]]] = {}
    held: dict[int, int] = {}
    ran = 0
    for s in range(stages):
        y = stream.event(s)
        if y is None:
            break
        ran = s + 1
        grown = stream.label(y)
        for x in [x for x, h in held.items() if stream.label(h) == grown]:
            events[x].append((s + 1, x0))
            del held[x]
        seed = y if y >= x0 else x0
        events[s] = [(0, seed)]
        if seed != x0:
            held[s] = y
    complete = not any(stream.recurs_after(h, ran) for h in held.values())
    return ApproximationTrace.from_events(events, ABOVE, complete, ran)


def settled_inputs(stream: Sigma2Stream, trace: ApproximationTrace) -> list[int]:
    """Inputs whose value can no longer change after the trace's horizon."""
    x0 = stream.x0
    return [x for x in trace.domain
            if trace.last(x) == x0 or not stream.recurs_after(trace.last(x), trace.horizon)]


def limit_range(stream: Sigma2Stream) -> set[int]:
    """rg(f) for the infinite run, read off a long enough finite run.

    Inputs seeded after the first pass through prefix and cycle repeat the
    cycle's fate (reset to x0), so that many inputs suffice.
    """
    if stream.finite:
        trace = range_encoder(stream, len(stream.prefix))
        return {trace.last(x) for x in trace.domain}
    n = len(stream.prefix) + len(stream.cycle)
    trace = range_encoder(stream, n + len(stream.cycle) + 1)
    done = set(settled_inputs(stream, trace))
    return {trace.last(x) for x in range(n) if x in done} | {stream.x0}


def parse_stream(text: str, path: str = "<stream>") -> Sigma2Stream:
    """Header ``x0=<nat>``, then ``grow <y>`` per stage; a ``cycle`` line starts the repeating tail."""
    x0 = None
    prefix: list[int] = []
    cycle: list[int] = []
    target = prefix
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if x0 is None:
                key, _, val = line.partition("=")
                if key.strip() != "x0":
                    raise ValueError("first line must be 'x0=<nat>'")
                x0 = int(val)
            elif line == "cycle":
                if target is cycle:
                    raise ValueError("second 'cycle' marker")
                target = cycle
            else:
                word, y = line.split()
                if word != "grow":
                    raise ValueError(f"expected 'grow <y>', got {word!r}")
                target.append(int(y))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
    if x0 is None:
        raise ParseError(path, 0, "missing 'x0=' header")
    return Sigma2Stream(x0, tuple(prefix), tuple(cycle))


def load_stream(path: str | Path) -> Sigma2Stream:
    return parse_stream(Path(path).read_text(), str(path))


def format_stream(stream: Sigma2Stream) -> str:
    lines = [f"x0={stream.x0}"] + [f"grow {y}" for y in stream.prefix]
    if stream.cycle:
        lines += ["cycle"] + [f"grow {y}" for y in stream.cycle]
    return "\n".join(lines) + "\n"
