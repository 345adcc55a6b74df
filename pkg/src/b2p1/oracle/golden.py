"""Committed evaluation plans.

Runtime code loads these JSON files and never re-derives.  ``regenerate``
rebuilds them from the derivation engine and the printed transcriptions;
the test suite checks that a fresh build is byte-identical to the files.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from ..params import Regime
from .derive import derive_eta, derive_scalar_equation
from .plan import EvaluationPlan, emit_evaluator
from .printed import printed_eta, printed_scalar

GOLDEN_DIR = Path(__file__).with_name("golden")
SCALAR_REGIMES = (Regime.CASE1, Regime.CASE2, Regime.CASE3, Regime.CASE4)
FORMS = ("consistent", "printed")


def plan_name(kind: str, regime: Regime, form: str) -> str:
    return f"{kind}-{regime.value}-{form}"


def build_plans() -> dict[str, EvaluationPlan]:
    sources = {
        ("scalar", "consistent"): derive_scalar_equation,
        ("scalar", "printed"): printed_scalar,
        ("eta", "consistent"): derive_eta,
        ("eta", "printed"): printed_eta,
    }
    out = {}
    for (kind, form), fn in sources.items():
        for r in SCALAR_REGIMES:
            name = plan_name(kind, r, form)
            out[name] = emit_evaluator(fn(r), name)
    return out


def regenerate(directory: Path | str = GOLDEN_DIR) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, plan in sorted(build_plans().items()):
        path = directory / f"{name}.json"
        path.write_text(plan.to_json(), encoding="utf-8", newline="\n")
        written.append(path)
    return written


@lru_cache(maxsize=None)
def load_plan(kind: str, regime: Regime, form: str) -> EvaluationPlan:
    path = GOLDEN_DIR / f"{plan_name(kind, regime, form)}.json"
    return EvaluationPlan.from_json(path.read_text(encoding="utf-8"))


if __name__ == "__main__":  # pragma: no cover
    for p in regenerate():
        print(p)
