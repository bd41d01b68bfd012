"""Strictly decreasing strings and the families of spoke types built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from afalab.approx.trace import ApproximationTrace
from afalab.errors import MonotonicityError, ParseError


@dataclass(frozen=True, order=True)
class DecreasingString:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if not vals:
            raise ValueError("a spoke type must be nonempty")
        if any(v < 0 for v in vals):
            raise ValueError(f"spoke type {vals} has a negative entry")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise MonotonicityError(f"spoke type {vals} is not strictly decreasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, *values: int) -> "DecreasingString":
        return cls(tuple(values))

    @classmethod
    def parse(cls, text: str) -> "DecreasingString":
        """Accepts ``2 1 0``, ``2,1,0`` or ``<2,1,0>``."""
        body = text.strip().strip("<>").replace(",", " ")
        return cls(tuple(int(tok) for tok in body.split()))

    @classmethod
    def from_trace(cls, trace: ApproximationTrace, x: int, upto: int | None = None) -> "DecreasingString":
        """The values of g(x, .) at its change stages (s_0 = 0 and each strict decrease)."""
        evs = trace.events[x] if upto is None else [e for e in trace.events[x] if e[0] <= upto]
        return cls(tuple(v for _, v in evs))

    @property
    def first(self) -> int:
        return self.values[0]

    @property
    def last(self) -> int:
        return self.values[-1]

    def extend(self, value: int) -> "DecreasingString":
        if value >= self.last:
            raise MonotonicityError(f"cannot extend {self} with {value}: values must strictly decrease")
        return DecreasingString(self.values + (value,))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self):
        return "<" + ",".join(map(str, self.values)) + ">"


def all_decreasing(max_len: int, max_val: int) -> list[DecreasingString]:
    """Every strictly decreasing string of length 1..max_len over 0..max_val, shortest first."""
    out = []
    for k in range(1, max_len + 1):
        for combo in combinations(range(max_val, -1, -1), k):
            out.append(DecreasingString(combo))
    return out


def countdown_string(n: int, k: int) -> DecreasingString:
    """<n, n-1, ..., k>."""
    return DecreasingString(tuple(range(n, k - 1, -1)))


EXPLICIT = "explicit"
ALL = "all"
PERIODIC = "periodic"
INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class FamilySpec:
    """Which spoke types a build uses besides the trace-encoding spokes.

    Infinite schedules (every string infinitely often) are truncated to
    ``repeats`` rounds of a round-robin.
    """

    kind: str
    strings: tuple[DecreasingString, ...] = ()
    max_len: int = 0
    max_val: int = 0
    n: int = 0
    repeats: int = 1
    base: "FamilySpec | None" = field(default=None)

    @classmethod
    def explicit(cls, strings) -> "FamilySpec":
        strings = tuple(s if isinstance(s, DecreasingString) else DecreasingString(tuple(s)) for s in strings)
        return cls(EXPLICIT, strings=strings)

    @classmethod
    def all_decreasing(cls, max_len: int, max_val: int, repeats: int = 1) -> "FamilySpec":
        return cls(ALL, max_len=max_len, max_val=max_val, repeats=repeats)

    @classmethod
    def periodic_countdown(cls, n: int, repeats: int = 1) -> "FamilySpec":
        return cls(PERIODIC, n=n, repeats=repeats)

    @classmethod
    def interleaved(cls, base: "FamilySpec") -> "FamilySpec":
        if base.kind == INTERLEAVED:
            raise ValueError("interleaving an interleaved family is not supported")
        return cls(INTERLEAVED, base=base)

    def schedule(self) -> list[DecreasingString]:
        """The base spoke types, in index order."""
        if self.kind == EXPLICIT:
            return list(self.strings)
        if self.kind == ALL:
            return all_decreasing(self.max_len, self.max_val) * self.repeats
        if self.kind == PERIODIC:
            return [countdown_string(self.n, self.n - i) for i in range(self.n + 1)] * self.repeats
        if self.kind == INTERLEAVED:
            return self.base.schedule()
        raise ValueError(f"unknown family kind {self.kind!r}")

    def uses_countdown(self) -> bool:
        kind = self.base.kind if self.kind == INTERLEAVED else self.kind
        return kind == PERIODIC

    def describe(self) -> str:
        if self.kind == EXPLICIT:
            return "explicit:" + ";".join(map(str, self.strings))
        if self.kind == ALL:
            return f"all:{self.max_len}:{self.max_val}:{self.repeats}"
        if self.kind == PERIODIC:
            return f"periodic:{self.n}:{self.repeats}"
        return "interleaved:" + self.base.describe()

    def __iter__(self) -> Iterator[DecreasingString]:
        return iter(self.schedule())


def parse_family(text: str, path: str = "<family>") -> FamilySpec:
    """One decreasing string per line (``2 1 0``, ``2,1,0`` or ``<2,1,0>``); ``#`` comments."""
    strings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            strings.append(DecreasingString.parse(line))
        except (ValueError, MonotonicityError) as exc:
            raise ParseError(path, lineno, f"bad spoke type {line!r}: {exc}") from None
    if not strings:
        raise ParseError(path, 0, "family file lists no spoke types")
    return FamilySpec.explicit(strings)
