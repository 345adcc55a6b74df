"""Derive the Boussinesq pairs and single-f equations from the scaled Euler set.

The pipeline is the classical one: build the truncated potential series, slave
F to f through the bottom condition, evaluate the kinematic and dynamic
surface conditions at ``z = 1 + alpha*eta``, truncate at the regime order,
solve the dynamic condition for eta and substitute it into the kinematic one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..params import Regime
from .termsum import TermSum, add

S = TermSum.symbol
F_SYM = ("f", 0, 0, 0)
FF_SYM = ("F", 0, 0, 0)
ETA = ("eta", 0, 0, 0)
H = ("h", 0, 0, 0)

ALPHA = (1, 0, 0, 0, 0)
BETA = (0, 1, 0, 0, 0)
GAMMA = (0, 0, 1, 0, 0)
DELTA = (0, 0, 0, 1, 0)
TAU = (0, 0, 0, 0, 1)
INV_BETA = (0, -1, 0, 0, 0)
RATIO = (0, -1, 1, 0, 0)


@dataclass(frozen=True)
class Ordering:
    """Weights of (alpha, beta, gamma, delta, tau) in powers of the leading parameter."""

    weights: tuple
    order: int
    surface_tension: bool
    leading: str


ORDERINGS = {
    Regime.CASE1: Ordering((1, 1, 1, 1, 0), 1, False, "beta"),
    Regime.CASE2: Ordering((1, 1, 1, 2, 0), 2, False, "beta"),
    Regime.CASE3: Ordering((2, 1, 2, 2, 0), 2, False, "beta"),
    Regime.CASE3ST: Ordering((2, 1, 2, 2, 0), 2, True, "beta"),
    Regime.CASE4: Ordering((1, 2, 2, 2, 0), 2, True, "alpha"),
}


def laplacian(ts: TermSum) -> TermSum:
    """beta*d_xx + gamma*d_yy."""
    return ts.diff("x", 2).scale(1, BETA) + ts.diff("y", 2).scale(1, GAMMA)


class _Derivation:
    def __init__(self, regime: Regime, surface_tension: bool | None = None):
        o = ORDERINGS[regime]
        self.regime = regime
        self.w = o.weights
        self.order = o.order
        self.st = o.surface_tension if surface_tension is None else surface_tension
        # room for the 1/beta in the kinematic condition and the 1/beta*phi_z^2 term
        self.gmax = o.order + o.weights[1]
        self.max_m = self.gmax // min(o.weights[1], o.weights[2]) + 2

    def trunc(self, ts, g=None):
        return ts.truncate(self.w, self.gmax if g is None else g)

    def mul(self, a, b, g=None):
        return a.multiply(b, self.w, self.gmax if g is None else g)

    # potential series ----------------------------------------------------
    def z_coefficients(self, F: TermSum) -> list[TermSum]:
        """Coefficient of z^k in phi, k = 0..2*max_m+1."""
        coeffs = []
        lf, lF = S(F_SYM), F
        for m in range(self.max_m + 1):
            sign = (-1) ** m
            coeffs.append(self.trunc(lf.scale(Fraction(sign, factorial(2 * m)))))
            coeffs.append(self.trunc(lF.scale(Fraction(sign, factorial(2 * m + 1)))))
            lf, lF = self.trunc(laplacian(lf)), self.trunc(laplacian(lF))
        return coeffs

    def bottom_F(self) -> TermSum:
        """Fixed-point solution of the bottom condition at z = delta*h."""
        h = S(H, 1, DELTA)  # z on the bottom
        zpow = [TermSum.one()]
        for _ in range(2 * self.max_m + 2):
            zpow.append(self.mul(zpow[-1], h))
        F = TermSum()
        for _ in range(self.gmax + 2):
            c = self.z_coefficients(F)
            # phi_z at the bottom without the bare F (k=1) contribution
            rest = add(*[self.mul(c[k].scale(k), zpow[k - 1]) for k in range(2, len(c))])
            phix = add(*[self.mul(c[k].diff("x"), zpow[k]) for k in range(len(c))])
            phiy = add(*[self.mul(c[k].diff("y"), zpow[k]) for k in range(len(c))])
            new = (-rest
                   + self.mul(S(("h", 1, 0, 0), 1, (0, 1, 0, 1, 0)), phix)
                   + self.mul(S(("h", 0, 1, 0), 1, (0, 0, 1, 1, 0)), phiy))
            new = self.trunc(new)
            if new == F:
                break
            F = new
        return F

    # surface conditions --------------------------------------------------
    def surface_pair(self) -> tuple[TermSum, TermSum]:
        F = self.bottom_F()
        c = self.z_coefficients(F)
        zs = TermSum.one() + S(ETA, 1, ALPHA)
        zpow = [TermSum.one()]
        for _ in range(len(c)):
            zpow.append(self.mul(zpow[-1], zs))

        def at_surface(coeffs):
            return self.trunc(add(*[self.mul(ck, zpow[k]) for k, ck in enumerate(coeffs)]))

        phix = at_surface([ck.diff("x") for ck in c])
        phiy = at_surface([ck.diff("y") for ck in c])
        phit = at_surface([ck.diff("t") for ck in c])
        phiz = at_surface([c[k].scale(k) for k in range(1, len(c))])

        eta = S(ETA)
        kin = (S(("eta", 0, 0, 1))
               + self.mul(S(("eta", 1, 0, 0), 1, ALPHA), phix)
               + self.mul(S(("eta", 0, 1, 0), 1, (1, -1, 1, 0, 0)), phiy)
               - phiz.scale(1, INV_BETA))
        quad = (self.mul(phix, phix)
                + self.mul(phiy, phiy).scale(1, RATIO)
                + self.mul(phiz, phiz, self.gmax + self.w[1]).scale(1, INV_BETA))
        dyn = phit + quad.scale(Fraction(1, 2), ALPHA) + eta
        if self.st:
            dyn = dyn - (S(("eta", 2, 0, 0), 1, (0, 1, 0, 0, 1))
                         + S(("eta", 0, 2, 0), 1, (0, 0, 1, 0, 1)))
        return kin.truncate(self.w, self.order), dyn.truncate(self.w, self.order)

    def eta_solution(self, dyn: TermSum) -> TermSum:
        """Truncated solution of the dynamic condition for eta."""
        if any(f[0] == "eta" and f != ETA for _, fs, _ in dyn for f in fs):
            raise ValueError(f"{self.regime.name}: dynamic condition contains eta derivatives; "
                             "eta cannot be expressed through f alone")
        lin = TermSum.symbol(ETA)
        rest = dyn - lin
        eta = TermSum()
        for _ in range(self.order + 2):
            new = rest.substitute("eta", lambda a, b, c, e=eta: e, self.w, self.order)
            new = (-new).truncate(self.w, self.order)
            if new == eta:
                break
            eta = new
        return eta

    def scalar(self, kin: TermSum, eta: TermSum) -> TermSum:
        @lru_cache(maxsize=None)
        def deta(a, b, c):
            return eta.diff("x", a).diff("y", b).diff("t", c)

        return kin.substitute("eta", deta, self.w, self.order).truncate(self.w, self.order)


def derive_pair(regime: Regime, surface_tension: bool | None = None) -> tuple[TermSum, TermSum]:
    """(kinematic, dynamic) surface conditions truncated at the regime order."""
    return _pair_cached(regime, surface_tension)


@lru_cache(maxsize=None)
def _pair_cached(regime, surface_tension):
    return _Derivation(regime, surface_tension).surface_pair()


def derive_bottom_F(regime: Regime) -> TermSum:
    d = _Derivation(regime)
    return d.bottom_F().truncate(d.w, d.order + d.w[1])


def derive_eta(regime: Regime) -> TermSum:
    """eta expressed through f and its derivatives (surface tension dropped)."""
    d = _Derivation(regime, surface_tension=False)
    _, dyn = derive_pair(regime, False)
    return d.eta_solution(dyn)


@lru_cache(maxsize=None)
def derive_unreduced(regime: Regime) -> TermSum:
    """Single-f equation before any zeroth-order simplification."""
    if regime is Regime.CASE3ST:
        raise ValueError("Case3ST: eta enters the dynamic condition through tau*eta_xx; "
                         "no single-f equation exists")
    d = _Derivation(regime, surface_tension=False)
    kin, _ = derive_pair(regime, False)
    return d.scalar(kin, derive_eta(regime))


def zeroth_order_replace(ts: TermSum, weights) -> TermSum:
    """Replace f_{..tt} in first- and higher-order terms by d_t^{-2}-reduced
    spatial derivatives using f_tt = f_xx + (gamma/beta) f_yy."""

    def wave(a, b, c):
        if c < 2:
            return TermSum.symbol(("f", a, b, c))
        return (wave(a + 2, b, c - 2)
                + wave(a, b + 2, c - 2).scale(1, RATIO))

    out = TermSum()
    for e, fs, v in ts:
        if sum(x * w for x, w in zip(e, weights)) == 0:
            out = out + TermSum({(e, fs): v})
            continue
        acc = TermSum({(e, ()): v})
        for f in fs:
            acc = acc * (wave(*f[1:]) if f[0] == "f" else TermSum.symbol(f))
        out = out + acc
    return out


@lru_cache(maxsize=None)
def derive_scalar_equation(regime: Regime) -> TermSum:
    ts = derive_unreduced(regime)
    if regime is Regime.CASE1:
        ts = zeroth_order_replace(ts, ORDERINGS[regime].weights)
    return ts
