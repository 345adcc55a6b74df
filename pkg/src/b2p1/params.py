"""Small parameters, parameter orderings and nondimensionalization."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

from .errors import InvalidParameter, RegimeError

RATIO_BAND = (1.0 / 3.0, 3.0)
TAU_NEGLIGIBLE = 1e-3


class Regime(enum.Enum):
    """Parameter orderings.  Case3ST is Case3 with surface tension kept."""

    CASE1 = "1"
    CASE2 = "2"
    CASE3 = "3"
    CASE3ST = "3st"
    CASE4 = "4"

    @classmethod
    def parse(cls, text) -> "Regime":
        s = str(text).strip().lower().replace("case", "").replace("_", "")
        for r in cls:
            if r.value == s:
                return r
        raise InvalidParameter(f"unknown regime {text!r}; expected one of 1, 2, 3, 3st, 4")


@dataclass(frozen=True)
class SmallParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "tau"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParameter(f"{name} must be finite, got {v}")
        if not (0.0 < self.beta < 1.0):
            raise InvalidParameter(f"beta must lie in (0, 1), got {self.beta}")
        for name in ("alpha", "gamma", "delta"):
            v = getattr(self, name)
            if not (0.0 <= v < 1.0):
                raise InvalidParameter(f"{name} must lie in [0, 1), got {v}")
        if self.tau < 0:
            raise InvalidParameter(f"tau must be nonnegative, got {self.tau}")

    @property
    def ratio(self) -> float:
        """gamma/beta."""
        return self.gamma / self.beta

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
                "delta": self.delta, "tau": self.tau}

    def replace(self, **kw) -> "SmallParams":
        d = self.as_dict()
        d.update(kw)
        return SmallParams(**d)


def nondimensionalize(a, H, L, l, a_h, T, rho, g) -> SmallParams:
    """Scaled parameters from physical amplitudes, depth, wavelengths and surface tension.

    ``a_h = 0`` (flat bottom) and ``T = 0`` are allowed.
    """
    for name, v in (("a", a), ("H", H), ("L", L), ("l", l), ("rho", rho), ("g", g)):
        if not v > 0:
            raise InvalidParameter(f"{name} must be positive, got {v}")
    if a_h < 0 or T < 0:
        raise InvalidParameter("a_h and T must be nonnegative")
    return SmallParams(alpha=a / H, beta=(H / L) ** 2, gamma=(H / l) ** 2,
                       delta=a_h / H, tau=T / (rho * g * H * H))


@dataclass
class RegimeDiagnostics:
    regime: Regime
    ratios: dict
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.warnings


def regime_ratios(p: SmallParams, r: Regime) -> dict:
    if r is Regime.CASE1:
        return {"A": p.alpha / p.beta, "G": p.gamma / p.beta, "D": p.delta / p.beta}
    if r is Regime.CASE2:
        return {"A": p.alpha / p.beta, "G": p.gamma / p.beta, "D": p.delta / p.beta ** 2}
    if r in (Regime.CASE3, Regime.CASE3ST):
        b2 = p.beta ** 2
        return {"A": p.alpha / b2, "G": p.gamma / b2, "D": p.delta / b2}
    a2 = p.alpha ** 2
    if a2 == 0:
        raise RegimeError("Case4 is ordered in alpha; alpha must be positive")
    return {"B": p.beta / a2, "G": p.gamma / a2, "D": p.delta / a2}


def validate_regime(p: SmallParams, r: Regime, *, emit: bool = False) -> RegimeDiagnostics:
    """Ratio constants of the ordering and advisory warnings.

    The band [1/3, 3] for "close to 1" is this package's choice.  A zero ratio
    is allowed only for D (flat bottom); other zero or non-finite ratios are errors.
    """
    ratios = regime_ratios(p, r)
    diag = RegimeDiagnostics(r, ratios)
    lo, hi = RATIO_BAND
    for name, v in ratios.items():
        if not math.isfinite(v):
            raise RegimeError(f"ratio {name} is not finite")
        if v == 0:
            if name == "D":
                continue
            raise RegimeError(f"ratio {name} is zero; the {r.name} ordering needs it positive")
        if not (lo <= v <= hi):
            diag.warnings.append(
                f"{name}={v:.4g} outside [{lo:.3g}, {hi:.3g}] (package band for 'order one')")
    if r is Regime.CASE3 and p.tau * max(p.beta, p.gamma) > TAU_NEGLIGIBLE:
        diag.warnings.append(
            f"tau={p.tau:.3g}: surface tension not negligible for Case3; use Case3ST")
    if r is Regime.CASE3ST and p.tau == 0:
        diag.warnings.append("Case3ST with tau=0 reduces to Case3")
    if emit:
        for w in diag.warnings:
            warnings.warn(w, stacklevel=2)
    return diag
