"""Decoding plans: the answer -> output table fixed before any oracle call.

A plan names at most a few oracle queries and a list of candidate linear
forms ``const + sum(coef_i * answer_i)``; the decoded value is the least
candidate.  Because the forms are written down first, a plan is exactly a
bounded truth-table computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from afalab.reductions import QueryAudit, call_oracle

Form = tuple[float, tuple[int, ...], str]     # (constant, coefficient per query, label)


@dataclass(frozen=True)
class Plan:
    x: int
    y: int
    case: str
    queries: tuple[tuple[int, int], ...]
    forms: tuple[Form, ...]

    def evaluate(self, answers: Sequence[int]) -> tuple[int, str]:
        if len(answers) != len(self.queries):
            raise ValueError(f"plan needs {len(self.queries)} answers, got {len(answers)}")
        best, label = math.inf, ""
        for const, coefs, lab in self.forms:
            val = const
            for c, ans in zip(coefs, answers):
                val += c * ans
            if val < best:
                best, label = val, lab
        if best == math.inf:
            raise ValueError(f"plan for ({self.x}, {self.y}) has no finite candidate")
        return int(best), label

    def table(self) -> list[dict]:
        return [{"label": lab, "const": const, "coefficients": list(coefs)}
                for const, coefs, lab in self.forms]


def make_plan(x: int, y: int, case: str, raw: list[tuple[float, int, int, str]],
              qx: tuple[int, int] | None, qy: tuple[int, int] | None) -> Plan:
    """Turn (const, coef on x's spoke, coef on y's spoke, label) rows into a plan.

    A query is kept only if some candidate uses it; a shared spoke is asked once.
    """
    raw = [r for r in raw if r[0] < math.inf]
    use_x = qx is not None and any(r[1] for r in raw)
    use_y = qy is not None and any(r[2] for r in raw)
    if use_x and use_y and qx == qy:
        return Plan(x, y, case, (qx,), tuple((c, (cx + cy,), lab) for c, cx, cy, lab in raw))
    queries = []
    if use_x:
        queries.append(qx)
    if use_y:
        queries.append(qy)
    forms = []
    for c, cx, cy, lab in raw:
        coefs = ([cx] if use_x else []) + ([cy] if use_y else [])
        forms.append((c, tuple(coefs), lab))
    return Plan(x, y, case, tuple(queries), tuple(forms))


def run_plan(plan: Plan, oracle) -> tuple[int, str, QueryAudit]:
    answers = [call_oracle(oracle, q) for q in plan.queries]
    audit = QueryAudit()
    audit.record((plan.x, plan.y), plan.queries)
    value, label = plan.evaluate(answers)
    return value, label, audit
