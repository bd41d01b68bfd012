"""Stage-indexed approximation traces g(x, s) stored as change events."""

from __future__ import annotations

from bisect import bisect_right
from pathlib import Path
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from afalab.errors import CompletenessError, InputRangeError, KindError, ParseError

ABOVE = "above"
BELOW = "below"
FREE = "free"
KINDS = (ABOVE, BELOW, FREE)

Event = tuple[int, int]


def _normalize(events: Iterable[Event]) -> tuple[Event, ...]:
    """Sort by stage and drop events that do not change the value."""
    out: list[Event] = []
    for stage, value in sorted(events):
        if stage < 0 or value < 0:
            raise ValueError(f"stages and values must be naturals, got ({stage}, {value})")
        if out and out[-1][0] == stage:
            raise ValueError(f"two events at stage {stage}")
        if out and out[-1][1] == value:
            continue
        out.append((stage, value))
    return tuple(out)


@dataclass(frozen=True)
class ApproximationTrace:
    """A computable approximation g(x, s), one event list per input.

    ``events[x]`` holds ``(stage, value)`` pairs: g(x, s) is the value of the
    latest event with stage <= s.  The first event of every input sits at
    stage 0.  ``horizon`` is the last stage that was actually simulated.
    """

    events: Mapping[int, tuple[Event, ...]]
    kind: str = FREE
    complete: bool = True
    horizon: int = field(default=-1)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindError(f"unknown trace kind {self.kind!r}")
        frozen = {}
        last = 0
        for x, evs in self.events.items():
            evs = tuple((int(s), int(v)) for s, v in evs)
            if not evs or evs[0][0] != 0:
                raise ValueError(f"input {x} has no value at stage 0")
            for (s0, v0), (s1, v1) in zip(evs, evs[1:]):
                if s1 <= s0:
                    raise ValueError(f"input {x}: stages not strictly increasing")
                if v1 == v0:
                    raise ValueError(f"input {x}: event at stage {s1} does not change the value")
                if self.kind == ABOVE and v1 > v0:
                    raise KindError(f"input {x}: value rises at stage {s1} in a from-above trace")
                if self.kind == BELOW and v1 < v0:
                    raise KindError(f"input {x}: value falls at stage {s1} in a from-below trace")
            frozen[int(x)] = evs
            last = max(last, evs[-1][0])
        object.__setattr__(self, "events", dict(sorted(frozen.items())))
        if self.horizon < last:
            object.__setattr__(self, "horizon", last)

    @classmethod
    def from_events(cls, events: Mapping[int, Iterable[Event]], kind: str = FREE,
                    complete: bool = True, horizon: int = -1) -> "ApproximationTrace":
        return cls({x: _normalize(evs) for x, evs in events.items()}, kind, complete, horizon)

    @classmethod
    def from_sequences(cls, sequences: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
                       kind: str = FREE, complete: bool = True) -> "ApproximationTrace":
        """Build from explicit stage-by-stage values g(x, 0), g(x, 1), ..."""
        if not isinstance(sequences, Mapping):
            sequences = dict(enumerate(sequences))
        events = {x: _normalize(enumerate(seq)) for x, seq in sequences.items()}
        horizon = max((len(seq) - 1 for seq in sequences.values()), default=0)
        return cls(events, kind, complete, horizon)

    @property
    def domain(self) -> list[int]:
        return list(self.events)

    def _events(self, x: int) -> tuple[Event, ...]:
        try:
            return self.events[x]
        except KeyError:
            raise InputRangeError(f"input {x} is outside the trace's domain") from None

    def __contains__(self, x: int) -> bool:
        return x in self.events

    def value(self, x: int, s: int) -> int:
        evs = self._events(x)
        i = bisect_right(evs, (s, float("inf"))) - 1
        return evs[max(i, 0)][1]

    def first(self, x: int) -> int:
        return self._events(x)[0][1]

    def last(self, x: int) -> int:
        """Value at the horizon, whether or not the trace is complete."""
        return self._events(x)[-1][1]

    def limit(self, x: int) -> int:
        if not self.complete:
            raise CompletenessError("limit of an incomplete trace is unknown")
        return self.last(x)

    def change_stages(self, x: int) -> list[int]:
        """Stages t > 0 with g(x, t - 1) != g(x, t)."""
        return [s for s, _ in self._events(x)[1:]]

    def sequence(self, x: int, upto: int | None = None) -> list[int]:
        upto = self.horizon if upto is None else upto
        return [self.value(x, s) for s in range(upto + 1)]

    def values(self, x: int) -> list[int]:
        """The distinct successive values taken by g(x, .)."""
        return [v for _, v in self._events(x)]

    def restrict(self, xs: Iterable[int]) -> "ApproximationTrace":
        return ApproximationTrace({x: self._events(x) for x in xs}, self.kind, self.complete, self.horizon)

    def truncate(self, stage: int) -> "ApproximationTrace":
        """The trace as known at ``stage``; incomplete if anything was cut."""
        cut = {x: tuple(e for e in evs if e[0] <= stage) for x, evs in self.events.items()}
        lost = any(len(cut[x]) != len(evs) for x, evs in self.events.items())
        complete = self.complete and not lost and stage >= self.horizon
        return ApproximationTrace(cut, self.kind, complete, stage)


def format_trace(trace: ApproximationTrace) -> str:
    """Header ``kind=... complete=0|1 domain=<n>``, then ``x <x> s <s> v <v>`` per event.

    ``domain`` is the number of inputs; a trace file always covers 0..domain-1.
    """
    lines = [f"kind={trace.kind} complete={int(trace.complete)} domain={len(trace.events)}"]
    if trace.horizon > max((evs[-1][0] for evs in trace.events.values()), default=0):
        lines[0] += f" horizon={trace.horizon}"
    for x, evs in trace.events.items():
        lines += [f"x {x} s {s} v {v}" for s, v in evs]
    return "\n".join(lines) + "\n"


def parse_trace(text: str, path: str = "<trace>") -> ApproximationTrace:
    header = None
    events: dict[int, list[Event]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        try:
            if header is None:
                header = dict(tok.split("=", 1) for tok in toks)
                if header.get("kind") not in KINDS:
                    raise ValueError(f"kind must be one of {', '.join(KINDS)}")
                if header.get("complete") not in ("0", "1") or "domain" not in header:
                    raise ValueError("header needs complete=0|1 and domain=<nat>")
                header["domain"] = int(header["domain"])
                continue
            if len(toks) != 6 or toks[0::2] != ["x", "s", "v"]:
                raise ValueError("expected 'x <nat> s <nat> v <nat>'")
            x, s, v = (int(t) for t in toks[1::2])
            if not 0 <= x < header["domain"]:
                raise ValueError(f"input {x} is outside domain={header['domain']}")
            events.setdefault(x, []).append((s, v))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
    if header is None:
        raise ParseError(path, 0, "missing trace header")
    missing = [x for x in range(header["domain"]) if x not in events]
    if missing:
        raise ParseError(path, 0, f"inputs without events: {missing[:5]}")
    try:
        return ApproximationTrace.from_events(events, header["kind"], header["complete"] == "1",
                                              int(header.get("horizon", -1)))
    except (ValueError, KindError) as exc:
        raise ParseError(path, 0, str(exc)) from None


def load_trace(path) -> ApproximationTrace:
    return parse_trace(Path(path).read_text(), str(path))


def dump_trace(trace: ApproximationTrace, path) -> None:
    Path(path).write_text(format_trace(trace))
