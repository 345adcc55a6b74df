"""First-order perturbation cascade around exact linear waves.

f = f0 + alpha*a + beta*b + gamma*g + delta*d, where f0 solves the wave
equation f_xx + r f_yy - f_tt = 0 (r = gamma/beta) and every correction u
solves u_xx + r u_yy - u_tt = S with a source built from f0.  All fields are
finite sums of space-time harmonics ``A t^p exp(i(Kx x + Ky y - Omega t))``
so products and derivatives are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, perm

import numpy as np

from .bathymetry import Bathymetry
from .errors import InvalidParameter, OffGridMode, ResonantForcing
from .grid import Grid2D
from .jets import JetProvider
from .params import SmallParams

SOURCE_NAMES = ("a", "b", "g", "d")


@dataclass(frozen=True)
class WaveComponent:
    jx: int
    jy: int
    amp: float
    phase: float = 0.0
    branch: int = 1  # sign of omega


@dataclass(frozen=True)
class PlaneWaveSpec:
    components: tuple
    Lx: float
    Ly: float
    ratio: float = 1.0  # gamma/beta

    def wavenumbers(self, c: WaveComponent):
        return 2 * math.pi * c.jx / self.Lx, 2 * math.pi * c.jy / self.Ly

    def omega(self, c: WaveComponent) -> float:
        kx, ky = self.wavenumbers(c)
        return math.copysign(math.sqrt(kx * kx + self.ratio * ky * ky), c.branch)


@dataclass
class HarmonicField:
    """Finite sum of harmonics keyed by ``(jx, jy, n, p)``.

    ``n`` holds integer multiples of the base frequencies ``freqs`` so that
    Omega = n . freqs is exact bookkeeping; ``p`` is the power of t.
    """

    Lx: float
    Ly: float
    freqs: tuple
    terms: dict = field(default_factory=dict)

    # -- construction ---------------------------------------------------
    def _like(self, terms=None) -> "HarmonicField":
        return HarmonicField(self.Lx, self.Ly, self.freqs, dict(terms or {}))

    def _check(self, other):
        if (other.Lx, other.Ly, other.freqs) != (self.Lx, self.Ly, self.freqs):
            raise InvalidParameter("harmonic fields live on different bases")

    def wavevector(self, key):
        jx, jy, n, _ = key
        return (2 * math.pi * jx / self.Lx, 2 * math.pi * jy / self.Ly,
                float(np.dot(n, self.freqs)) if n else 0.0)

    def cleaned(self, tol=0.0) -> "HarmonicField":
        return self._like({k: v for k, v in self.terms.items() if abs(v) > tol})

    # -- algebra ----------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) + v
        return self._like(out)

    def scale(self, s) -> "HarmonicField":
        return self._like({k: s * v for k, v in self.terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, HarmonicField):
            return self.scale(other)
        self._check(other)
        out = {}
        for (ax, ay, an, ap), u in self.terms.items():
            for (bx, by, bn, bp), v in other.terms.items():
                n = tuple(i + j for i, j in zip(an, bn)) if an and bn else (an or bn)
                k = (ax + bx, ay + by, n, ap + bp)
                out[k] = out.get(k, 0j) + u * v
        return self._like(out)

    def deriv(self, a=0, b=0, c=0) -> "HarmonicField":
        out = {}
        for key, amp in self.terms.items():
            jx, jy, n, p = key
            kx, ky, om = self.wavevector(key)
            s = amp * (1j * kx) ** a * (1j * ky) ** b
            # d_t^c [t^p e^{-i om t}] = sum_m C(c, m) p!/(p-m)! t^(p-m) (-i om)^(c-m)
            for m in range(0, min(c, p) + 1):
                v = s * comb(c, m) * perm(p, m) * (-1j * om) ** (c - m)
                if v != 0:
                    kk = (jx, jy, n, p - m)
                    out[kk] = out.get(kk, 0j) + v
        return self._like(out)

    # -- evaluation -----------------------------------------------------
    def evaluate(self, grid: Grid2D, t: float, a=0, b=0, c=0, *, imag=False):
        X, Y = grid.mesh()
        acc = np.zeros(grid.shape, dtype=complex)
        for key, amp in self.deriv(a, b, c).terms.items():
            kx, ky, om = self.wavevector(key)
            acc += amp * t ** key[3] * np.exp(1j * (kx * X + ky * Y - om * t))
        return acc if imag else acc.real

    def conjugate_symmetric(self, tol=1e-12) -> bool:
        scale = max([abs(v) for v in self.terms.values()] + [1.0])
        for (jx, jy, n, p), v in self.terms.items():
            mate = self.terms.get((-jx, -jy, tuple(-i for i in n), p), 0j)
            if abs(mate - np.conj(v)) > tol * scale:
                return False
        return True


def _base(spec: PlaneWaveSpec):
    mags = []
    for comp in spec.components:
        w = abs(spec.omega(comp))
        if w == 0:
            continue
        if not any(math.isclose(w, m, rel_tol=1e-14) for m in mags):
            mags.append(w)
    return tuple(mags)


def zeroth_field(spec: PlaneWaveSpec, grid: Grid2D | None = None) -> HarmonicField:
    freqs = _base(spec)
    hf = HarmonicField(spec.Lx, spec.Ly, freqs)
    for comp in spec.components:
        if grid is not None and (abs(comp.jx) > grid.nx // 3 or abs(comp.jy) > grid.ny // 3):
            raise OffGridMode(f"mode ({comp.jx}, {comp.jy}) lies outside the dealias band of "
                              f"the {grid.nx}x{grid.ny} grid")
        om = spec.omega(comp)
        n = [0] * len(freqs)
        if om != 0:
            i = next(i for i, m in enumerate(freqs) if math.isclose(abs(om), m, rel_tol=1e-14))
            n[i] = 1 if om > 0 else -1
        n = tuple(n)
        z = 0.5 * comp.amp * complex(math.cos(comp.phase), math.sin(comp.phase))
        hf = hf + hf._like({(comp.jx, comp.jy, n, 0): z,
                            (-comp.jx, -comp.jy, tuple(-i for i in n), 0): np.conj(z)})
    return hf.cleaned()


class HarmonicJet(JetProvider):
    """Exact jet of a harmonic field at time ``t``."""

    def __init__(self, grid: Grid2D, hf: HarmonicField, t: float = 0.0):
        if not (math.isclose(grid.Lx, hf.Lx) and math.isclose(grid.Ly, hf.Ly)):
            raise OffGridMode("harmonic field periods differ from the grid")
        super().__init__(grid, t)
        self.field = hf

    def _compute(self, a, b, c):
        return self.field.evaluate(self.grid, self.t, a, b, c)


def zeroth_solution(spec: PlaneWaveSpec, grid: Grid2D, t: float = 0.0) -> HarmonicJet:
    return HarmonicJet(grid, zeroth_field(spec, grid), t)


def _bath_field(bath: Bathymetry, like: HarmonicField) -> HarmonicField:
    zero = tuple(0 for _ in like.freqs)
    return like._like({(jx, jy, zero, 0): c for jx, jy, c in bath.harmonics()})


def correction_sources(f0: HarmonicField, bath: Bathymetry | None, p: SmallParams,
                       form: str = "consistent") -> dict:
    """Sources S_a, S_b, S_g, S_d of the four correction equations.

    ``form="printed"`` uses the transverse source as typeset
    (r f_4y - 1/2 f_yytt + 2 f_xxyy); the consistent one follows from
    expanding the single-f equation to first order.
    """
    r = p.gamma / p.beta
    d = f0.deriv
    fx, fy, ft = d(1), d(0, 1), d(0, 0, 1)
    s_a = (2 * (fx * d(1, 0, 1)) + ft * d(2) + r * (2 * (fy * d(0, 1, 1)) + ft * d(0, 2)))
    s_b = d(2, 0, 2).scale(-0.5) + d(4).scale(1 / 6)
    if form == "printed":
        s_g = d(0, 4).scale(r) - d(0, 2, 2).scale(0.5) + d(2, 2).scale(2.0)
    elif form == "consistent":
        s_g = d(2, 2).scale(1 / 3) + d(0, 4).scale(r / 6) - d(0, 2, 2).scale(0.5)
    else:
        raise InvalidParameter(f"form must be 'consistent' or 'printed', got {form!r}")
    if p.delta == 0 and bath is None:
        s_d = f0._like()
    else:
        h = _bath_field(bath if bath is not None else Bathymetry.flat(), f0)
        s_d = (h * fx).deriv(1) + (h * fy).deriv(0, 1).scale(r)
    return {"a": s_a.cleaned(), "b": s_b.cleaned(), "g": s_g.cleaned(), "d": s_d.cleaned()}


def solve_correction(source: HarmonicField, p: SmallParams, tol_res: float = 1e-8, *,
                     on_resonance: str = "error") -> HarmonicField:
    """Particular solution of u_xx + r u_yy - u_tt = S with zero homogeneous part.

    A harmonic with D = Omega^2 - Kx^2 - r Ky^2 below ``tol_res * max(1, Omega^2)``
    raises :class:`ResonantForcing`, or with ``on_resonance="secular"`` gets the
    secular particular solution (t e^{i theta} S/(2i Omega); -S t^2/2 at rest).
    Only sources without t-powers are accepted.
    """
    if on_resonance not in ("error", "secular"):
        raise InvalidParameter("on_resonance must be 'error' or 'secular'")
    r = p.gamma / p.beta
    out = {}
    for key, s in source.terms.items():
        if key[3] != 0:
            raise InvalidParameter("sources with secular factors are not supported")
        kx, ky, om = source.wavevector(key)
        D = om * om - kx * kx - r * ky * ky
        if abs(D) >= tol_res * max(1.0, om * om):
            out[key] = out.get(key, 0j) + s / D
            continue
        if on_resonance == "error":
            raise ResonantForcing(key[:3], D)
        jx, jy, n, _ = key
        if om == 0:
            k2 = (jx, jy, n, 2)
            out[k2] = out.get(k2, 0j) - 0.5 * s
        else:
            k1 = (jx, jy, n, 1)
            out[k1] = out.get(k1, 0j) + s / (2j * om)
    return source._like(out)


def wave_operator(u: HarmonicField, p: SmallParams) -> HarmonicField:
    r = p.gamma / p.beta
    return (u.deriv(2) + u.deriv(0, 2).scale(r) - u.deriv(0, 0, 2)).cleaned()


def solve_all(f0: HarmonicField, bath, p: SmallParams, *, form="consistent", tol_res=1e-8,
              on_resonance="error") -> dict:
    src = correction_sources(f0, bath, p, form)
    out = {}
    for name in SOURCE_NAMES:
        if name == "d" and p.delta == 0:
            out[name] = f0._like()
            continue
        out[name] = solve_correction(src[name], p, tol_res, on_resonance=on_resonance)
    return out


def compose(f0: HarmonicField, corrections: dict, p: SmallParams) -> HarmonicField:
    weights = {"a": p.alpha, "b": p.beta, "g": p.gamma, "d": p.delta}
    total = f0
    for name in SOURCE_NAMES:
        if name in corrections and weights[name]:
            total = total + corrections[name].scale(weights[name])
    return total


def compose_and_surface(f0: HarmonicField, corrections: dict, p: SmallParams, grid: Grid2D,
                        t: float = 0.0):
    """Composite jet and the Case1 recovery of eta at time ``t``."""
    from .params import Regime
    from .scalar import eta_from_jet

    jet = HarmonicJet(grid, compose(f0, corrections, p), t)
    return jet, eta_from_jet(jet, p, Regime.CASE1)


def residual_ratio(spec: PlaneWaveSpec, grid: Grid2D, bath, p: SmallParams, t: float = 0.0, *,
                   form="consistent", on_resonance="secular"):
    """max|R(f0 + corrections)| / max|R(f0)| for the Case1 single-f equation."""
    from .params import Regime
    from .scalar import scalar_residual

    f0 = zeroth_field(spec, grid)
    corr = solve_all(f0, bath, p, form=form, on_resonance=on_resonance)
    jet, _ = compose_and_surface(f0, corr, p, grid, t)
    r1 = float(np.max(np.abs(scalar_residual(jet, bath, p, Regime.CASE1))))
    r0 = float(np.max(np.abs(scalar_residual(HarmonicJet(grid, f0, t), bath, p, Regime.CASE1))))
    return r1 / r0, r1, r0
