"""A finite catalog of step-bounded processes standing in for phi_e.

Every process answers phi_{e,s}(x, t): the t-th approximation value on
input x, provided it converges within s steps.  Unary uses (phi_e(x)) read
column t = 0.  All shapes are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from afalab.errors import ParseError

Context = Optional[Callable[[int, int], int]]

# name -> (arity, one-line description)
CATALOG: dict[str, tuple[int, str]] = {
    "constant": (1, "constant c: value c at every (x, t), converges at step 0"),
    "affine": (2, "affine a b: value a*x + b at every t, converges at step 0"),
    "staircase-down": (3, "staircase-down top period floor: max(top + x - t // period, floor)"),
    "staircase-up": (3, "staircase-up start period cap: min(start + t // period, cap)"),
    "delayed-converge": (2, "delayed-converge value delay: value, (x, t) converges at step delay*(x+1) + t"),
    "partial": (2, "partial k c: value c on inputs x < k, diverges elsewhere"),
    "tracking": (1, "tracking lag: copies the construction's own g(x, t), converges at step t + lag"),
    "divergent": (0, "divergent: never converges"),
}


@dataclass(frozen=True)
class StepProcess:
    index: int
    shape: str
    args: tuple[int, ...] = ()

    def __post_init__(self):
        if self.shape not in CATALOG:
            raise ValueError(f"unknown process shape {self.shape!r}")
        arity = CATALOG[self.shape][0]
        if len(self.args) != arity:
            raise ValueError(f"{self.shape} takes {arity} arguments, got {len(self.args)}")
        if self.shape in ("staircase-down", "staircase-up") and self.args[1] <= 0:
            raise ValueError("period must be positive")

    def converge_step(self, x: int, t: int) -> int | None:
        """Step count at which phi_e(x, t) converges; None if never."""
        shape, a = self.shape, self.args
        if shape in ("constant", "affine"):
            return 0
        if shape in ("staircase-down", "staircase-up"):
            return t
        if shape == "delayed-converge":
            return a[1] * (x + 1) + t
        if shape == "partial":
            return t if x < a[0] else None
        if shape == "tracking":
            return t + a[0]
        return None

    def output(self, x: int, t: int, ctx: Context = None) -> int:
        shape, a = self.shape, self.args
        if shape == "constant":
            return a[0]
        if shape == "affine":
            return a[0] * x + a[1]
        if shape == "staircase-down":
            top, period, floor = a
            return max(top + x - t // period, floor)
        if shape == "staircase-up":
            start, period, cap = a
            return min(start + t // period, cap)
        if shape == "delayed-converge":
            return a[0]
        if shape == "partial":
            return a[1]
        if shape == "tracking":
            if ctx is None:
                raise ValueError("a tracking process needs the construction's context")
            return ctx(x, t)
        raise ValueError(f"{shape} has no output")

    def run(self, x: int, t: int, s: int, ctx: Context = None) -> int | None:
        """phi_{e,s}(x, t), or None if not converged within s steps."""
        step = self.converge_step(x, t)
        if step is None or step > s:
            return None
        return self.output(x, t, ctx)

    def apply(self, x: int, s: int) -> int | None:
        """Unary reading phi_{e,s}(x)."""
        return self.run(x, 0, s)

    def prefix(self, x: int, s: int, ctx: Context = None) -> list[int]:
        """phi_{e,s}(x, 0), ..., phi_{e,s}(x, t) for the greatest t <= s with all converged."""
        out = []
        for t in range(s + 1):
            v = self.run(x, t, s, ctx)
            if v is None:
                break
            out.append(v)
        return out

    @property
    def from_above(self) -> bool:
        return self.shape not in ("staircase-up", "tracking")

    def limit(self, x: int) -> int | None:
        """lim_t phi_e(x, t) when the shape determines it; None for divergence or tracking."""
        shape, a = self.shape, self.args
        if shape == "constant":
            return a[0]
        if shape == "affine":
            return a[0] * x + a[1]
        if shape in ("staircase-down", "staircase-up"):
            return a[2]
        if shape == "delayed-converge":
            return a[0]
        if shape == "partial":
            return a[1] if x < a[0] else None
        return None

    def unary(self, x: int) -> int | None:
        """phi_e(x) if it ever converges."""
        return None if self.converge_step(x, 0) is None else self.output(x, 0)

    def stabilized(self, x: int, s: int) -> bool:
        """Whether phi_{e,s}(x, .) has already reached its limit by step s."""
        lim = self.limit(x)
        seq = self.prefix(x, s)
        return lim is not None and bool(seq) and seq[-1] == lim

    def describe(self) -> str:
        return " ".join(["e", str(self.index), "prog", self.shape, *map(str, self.args)])


Registry = list[StepProcess]


def parse_registry(text: str, path: str = "<registry>") -> Registry:
    """Lines ``e <nat> prog <shape> args...``; ``#`` starts a comment."""
    out: Registry = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if len(line) < 4 or line[0] != "e" or line[2] != "prog":
                raise ValueError("expected 'e <nat> prog <shape> args...'")
            index = int(line[1])
            if index in seen:
                raise ValueError(f"duplicate process index {index}")
            proc = StepProcess(index, line[3], tuple(int(a) for a in line[4:]))
        except ValueError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        seen.add(index)
        out.append(proc)
    return sorted(out, key=lambda p: p.index)


def load_registry(path: str | Path) -> Registry:
    return parse_registry(Path(path).read_text(), str(path))


def format_registry(registry: Registry) -> str:
    return "".join(p.describe() + "\n" for p in sorted(registry, key=lambda p: p.index))
