"""m-, tt- and btt-reductions between functions, with per-call query audits.

Oracles are plain callables consulted by value.  Partial functions are
callables (or mappings) that return ``DIVERGE`` (``None``) where undefined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from afalab.errors import (
    BoundViolation,
    CompositionError,
    InputRangeError,
    NormViolation,
    OracleDomainError,
    ParseError,
)

DIVERGE = None

Selector = Callable[[Any], Sequence[Hashable]]
Evaluator = Callable[[Any, tuple], int]


@dataclass
class QueryAudit:
    """Log of the oracle inputs consulted, one entry per reduction call."""

    calls: list[tuple[Any, list]] = field(default_factory=list)

    def record(self, x, queries: Iterable) -> None:
        self.calls.append((x, list(queries)))

    @property
    def max_queries(self) -> int:
        return max((len(q) for _, q in self.calls), default=0)

    @property
    def queries(self) -> list:
        """Queries of the most recent call."""
        return self.calls[-1][1] if self.calls else []

    def merge(self, other: "QueryAudit") -> "QueryAudit":
        return QueryAudit(self.calls + other.calls)

    def to_dict(self) -> dict:
        return {
            "calls": [{"input": _jsonable(x), "queries": [_jsonable(q) for q in qs]}
                      for x, qs in self.calls],
            "max_queries": self.max_queries,
        }


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(i) for i in v]
    return v


def call_oracle(oracle, q):
    """Consult ``oracle`` at ``q``; undefined answers raise OracleDomainError."""
    try:
        answer = oracle(q) if callable(oracle) else oracle[q]
    except (KeyError, IndexError, InputRangeError) as exc:
        raise OracleDomainError(f"oracle undefined at {q!r}") from exc
    if answer is None:
        raise OracleDomainError(f"oracle undefined at {q!r}")
    return answer


@dataclass(frozen=True)
class TruthTableReduction:
    """alpha(x) = evaluator(x, beta restricted to selector(x)).

    ``domain`` and ``codomain`` are free-form tags naming the input space and
    the oracle's input space; composition checks that they line up.
    """

    selector: Selector
    evaluator: Evaluator
    norm: int | None = None
    name: str = "tt"
    domain: str | None = None
    codomain: str | None = None

    def __call__(self, oracle, x):
        return apply_tt(self, oracle, x)


def apply_tt(r: TruthTableReduction, oracle, x) -> tuple[int, QueryAudit]:
    queries = list(r.selector(x))
    answers = tuple(call_oracle(oracle, q) for q in queries)
    audit = QueryAudit()
    audit.record(x, queries)
    return r.evaluator(x, answers), audit


def verify_btt_norm(r: TruthTableReduction, inputs: Iterable) -> int:
    """Largest query set over ``inputs``; raises NormViolation past the declared norm."""
    worst = 0
    for x in inputs:
        size = len(set(r.selector(x)))
        if r.norm is not None and size > r.norm:
            raise NormViolation(x, size, r.norm)
        worst = max(worst, size)
    return worst


def compose_btt(r1: TruthTableReduction, r2: TruthTableReduction) -> TruthTableReduction:
    """alpha <= beta via r1 and beta <= gamma via r2 give alpha <= gamma.

    The composite asks gamma the union of r2's queries over r1's query set,
    so its norm is at most the product of the two norms.
    """
    if r1.codomain is not None and r2.domain is not None and r1.codomain != r2.domain:
        raise CompositionError(f"{r1.name} queries {r1.codomain!r} but {r2.name} reduces {r2.domain!r}")

    def selector(x):
        seen: dict = {}
        for q in r1.selector(x):
            for q2 in r2.selector(q):
                seen.setdefault(q2, None)
        return list(seen)

    def evaluator(x, answers):
        table = dict(zip(selector(x), answers))
        inner = tuple(r2.evaluator(q, tuple(table[q2] for q2 in r2.selector(q)))
                      for q in r1.selector(x))
        return r1.evaluator(x, inner)

    norm = None if r1.norm is None or r2.norm is None else r1.norm * r2.norm
    return TruthTableReduction(selector, evaluator, norm, f"{r1.name}*{r2.name}", r1.domain, r2.codomain)


def fn_graph_tt_pair(bound: Callable[[int], int]) -> tuple[TruthTableReduction, TruthTableReduction]:
    """The two tt-reductions between a computably bounded h and its graph G.

    Forward: h(x) from chi_G by asking every pair (x, n) with n <= bound(x).
    Reverse: chi_G(x, y) from h with the single query h(x).
    """

    def forward_selector(x):
        return [(x, n) for n in range(bound(x) + 1)]

    def forward_evaluator(x, answers):
        hits = [n for n, a in enumerate(answers) if a]
        if not hits:
            raise BoundViolation(f"no graph member (x, n) with n <= {bound(x)} for x = {x}")
        if len(hits) > 1:
            raise BoundViolation(f"graph oracle is not a function at x = {x}: {hits}")
        return hits[0]

    forward = TruthTableReduction(forward_selector, forward_evaluator, None,
                                  "h<=tt chi_G", "h", "G")
    reverse = TruthTableReduction(lambda xy: [xy[0]],
                                  lambda xy, ans: int(ans[0] == xy[1]),
                                  1, "chi_G<=1-btt h", "G", "h")
    return forward, reverse


def graph_of(h: Callable[[int], int]) -> Callable[[tuple[int, int]], int]:
    """Characteristic function of the graph {(x, h(x))}."""
    return lambda xy: int(h(xy[0]) == xy[1])


# m-reductions

def evaluate(f, x):
    """Value of a partial function; DIVERGE where it is undefined."""
    if isinstance(f, Mapping):
        if x not in f:
            raise InputRangeError(f"table has no entry for {x}")
        return f[x]
    return f(x)


@dataclass(frozen=True)
class MReduction:
    g: Callable[[int], int]
    injective: bool = False
    name: str = "m"

    def then(self, other: "MReduction") -> "MReduction":
        """phi <= psi via self and psi <= chi via other give phi <= chi."""
        return MReduction(lambda x: other.g(self.g(x)), self.injective and other.injective,
                          f"{other.name}.{self.name}")


@dataclass(frozen=True)
class MVerdict:
    ok: bool
    counterexample: Any = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_m_reduction(m: MReduction, phi, psi, sample: Iterable[int]) -> MVerdict:
    """Check phi = psi . g, including agreement of divergence, on ``sample``."""
    seen: dict[int, int] = {}
    for x in sample:
        gx = m.g(x)
        left, right = evaluate(phi, x), evaluate(psi, gx)
        if (left is DIVERGE) != (right is DIVERGE):
            return MVerdict(False, x, f"divergence disagrees at {x}: phi={left}, psi(g(x))={right}")
        if left != right:
            return MVerdict(False, x, f"phi({x})={left} but psi(g({x}))=psi({gx})={right}")
        if m.injective:
            if gx in seen and seen[gx] != x:
                return MVerdict(False, x, f"g({seen[gx]}) = g({x}) = {gx} contradicts injectivity")
            seen[gx] = x
    return MVerdict(True)


# reduction description files

def _builtin_selector(name: str, args: list[int]) -> Selector:
    if name == "identity":
        return lambda x: [x]
    if name == "empty":
        return lambda x: []
    if name == "window":
        (k,) = args
        return lambda x: list(range(x, x + k))
    if name == "pair-column":
        (k,) = args
        return lambda x: [(x, n) for n in range(k + 1)]
    raise KeyError(name)


def _builtin_evaluator(name: str, args: list[int]) -> Evaluator:
    if name == "constant":
        (c,) = args
        return lambda x, ans: c
    if name == "identity":
        return lambda x, ans: ans[0]
    if name == "offset":
        (c,) = args
        return lambda x, ans: ans[0] + c
    if name == "sum":
        return lambda x, ans: sum(ans)
    if name == "min":
        return lambda x, ans: min(ans)
    if name == "max":
        return lambda x, ans: max(ans)
    if name == "count-true":
        return lambda x, ans: sum(1 for a in ans if a)
    raise KeyError(name)


SELECTORS = ("identity", "empty", "window k", "pair-column k")
EVALUATORS = ("constant c", "identity", "offset c", "sum", "min", "max", "count-true")


def parse_reduction(text: str, path: str = "<reduction>") -> TruthTableReduction:
    """Parse a reduction description.

    Lines: ``name <word>``, ``norm <k>``, ``selector <x> -> [q1, q2, ...]``
    (finite table rows), ``selector builtin <name> [args]`` and
    ``evaluator <name> [args]``.  ``#`` starts a comment.
    """
    name, norm = "tt", None
    rows: dict[int, list[int]] = {}
    selector = evaluator = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "name":
                name = rest
            elif head == "norm":
                norm = int(rest)
            elif head == "selector" and rest.startswith("builtin"):
                sname, *sargs = rest.split()[1:]
                selector = _builtin_selector(sname, [int(a) for a in sargs])
            elif head == "selector":
                lhs, arrow, rhs = rest.partition("->")
                if not arrow:
                    raise ValueError("expected 'selector x -> [...]'")
                items = rhs.strip().strip("[]").strip()
                rows[int(lhs)] = [int(q) for q in items.split(",")] if items else []
            elif head == "evaluator":
                ename, *eargs = rest.split()
                evaluator = _builtin_evaluator(ename, [int(a) for a in eargs])
            else:
                raise ValueError(f"unknown directive {head!r}")
        except (ValueError, KeyError) as exc:
            raise ParseError(path, lineno, f"bad line {raw.strip()!r}: {exc}") from None
    if rows:
        if selector is not None:
            raise ParseError(path, 0, "both table rows and a builtin selector given")

        def selector(x, _rows=rows):
            if x not in _rows:
                raise InputRangeError(f"reduction table has no row for {x}")
            return _rows[x]
    if selector is None or evaluator is None:
        raise ParseError(path, 0, "a reduction needs a selector and an evaluator")
    return TruthTableReduction(selector, evaluator, norm, name)


def load_reduction(path: str | Path) -> TruthTableReduction:
    return parse_reduction(Path(path).read_text(), str(path))


def audit_report(r: TruthTableReduction, oracle, inputs: Sequence) -> dict:
    """JSON-ready report: per-input query lists, values and the observed norm."""
    rows = []
    audit = QueryAudit()
    for x in inputs:
        value, a = apply_tt(r, oracle, x)
        audit = audit.merge(a)
        rows.append({"input": _jsonable(x), "queries": [_jsonable(q) for q in a.queries], "value": value})
    return {
        "reduction": r.name,
        "declared_norm": r.norm,
        "sampled_inputs": len(rows),
        "max_queries": audit.max_queries,
        "within_norm": r.norm is None or audit.max_queries <= r.norm,
        "calls": rows,
    }


def dump_report(report: dict, path: str | Path | None = None) -> str:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
