"""Compile a :class:`TermSum` into a numeric evaluation plan.

A plan is a list of requested derivative fields plus a coefficient table.
Plans are plain JSON so they can be committed as golden files and evaluated
without re-running the derivation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .termsum import PARAMS, TermSum

PLAN_VERSION = 1


@dataclass(frozen=True)
class PlanTerm:
    coef: Fraction
    exps: tuple
    factors: tuple  # indices into EvaluationPlan.requests, with repetition


@dataclass(frozen=True)
class EvaluationPlan:
    name: str
    requests: tuple  # sorted (base, nx, ny, nt)
    terms: tuple

    def __len__(self):
        return len(self.terms)

    @property
    def f_requests(self):
        return [r[1:] for r in self.requests if r[0] == "f"]

    def to_json(self) -> str:
        doc = {
            "version": PLAN_VERSION,
            "name": self.name,
            "params": list(PARAMS),
            "requests": [list(r) for r in self.requests],
            "terms": [{"coef": [t.coef.numerator, t.coef.denominator],
                       "exps": list(t.exps), "factors": list(t.factors)} for t in self.terms],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "EvaluationPlan":
        doc = json.loads(text)
        if doc.get("version") != PLAN_VERSION:
            raise ValueError(f"unsupported plan version {doc.get('version')}")
        return cls(doc["name"], tuple(tuple(r) for r in doc["requests"]),
                   tuple(PlanTerm(Fraction(*t["coef"]), tuple(t["exps"]), tuple(t["factors"]))
                         for t in doc["terms"]))

    def select(self, pred) -> "EvaluationPlan":
        return EvaluationPlan(self.name, self.requests, tuple(t for t in self.terms if pred(t)))

    def param_value(self, term: PlanTerm, p) -> float:
        v = float(term.coef)
        for e, name in zip(term.exps, PARAMS):
            if e:
                v *= getattr(p, name) ** e
        return v


def emit_evaluator(ts: TermSum, name: str = "") -> EvaluationPlan:
    """Deterministic plan for ``ts``; the empty sum gives the empty plan."""
    reqs = sorted({f for _, fs, _ in ts for f in fs})
    index = {r: i for i, r in enumerate(reqs)}
    terms = tuple(PlanTerm(Fraction(v), tuple(e), tuple(index[f] for f in fs)) for e, fs, v in ts)
    return EvaluationPlan(name, tuple(tuple(r) for r in reqs), terms)


def evaluate_plan(plan: EvaluationPlan, fields, p, shape=None) -> np.ndarray:
    """Sum of the plan's terms; ``fields(request)`` returns the sampled factor."""
    used = sorted({i for t in plan.terms for i in t.factors})
    vals = {i: fields(tuple(plan.requests[i])) for i in used}
    if shape is None:
        shape = np.shape(vals[used[0]]) if used else ()
    out = np.zeros(shape)
    for t in plan.terms:
        c = plan.param_value(t, p)
        if c == 0:
            continue
        acc = c
        for i in t.factors:
            acc = acc * vals[i]
        out = out + acc
    return out
