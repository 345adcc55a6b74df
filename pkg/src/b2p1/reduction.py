"""(1+1)-dimensional pairs in (eta, w = f_x), the KdV equation with an
uneven bottom, soliton initial data and the 2D-to-1D reduction check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bathymetry import Bathymetry
from .dynamics import (PairModel, StepperConfig, WaveState, as_sample, check_form,
                       dynamic_symbol, kinematic_symbol, rk4_fields, step_rk4)
from .errors import InvalidParameter, PicardDiverged
from .grid import Grid1D, Grid2D
from .params import Regime, SmallParams

KDV = "kdv"  # the single-eta KdV equation with an uneven bottom


@dataclass
class State1D:
    eta: np.ndarray
    w: np.ndarray
    t: float
    grid: Grid1D

    def copy(self) -> "State1D":
        return State1D(self.eta.copy(), self.w.copy(), self.t, self.grid)


def _parse_target(r):
    if isinstance(r, Regime):
        return r
    if str(r).lower() in ("kdv", "kdvuneven", "kdv-uneven"):
        return KDV
    return Regime.parse(r)


class Pair1DModel:
    """The y-invariant restriction of :class:`b2p1.dynamics.PairModel` in w = f_x.

    ``target`` is a :class:`Regime` or ``"kdv"``.  For the KdV target only
    ``eta`` evolves; ``c_disp`` defaults to beta/6 and ``as_printed`` selects 1/6.
    """

    def __init__(self, grid: Grid1D, bath, p: SmallParams, target, *, form: str = "consistent",
                 dealias: bool = True, picard_tol: float = 1e-12, picard_max_iters: int = 50,
                 c_disp: float | None = None, as_printed: bool = False):
        self.grid = grid
        self.bath = as_sample(bath, grid)
        self.p = p
        self.target = _parse_target(target)
        self.form = check_form(form)
        self.dealias = dealias
        self.picard_tol = picard_tol
        self.picard_max_iters = picard_max_iters
        self.last_picard_iters = 0
        k = grid.kx
        self._ik = 1j * k
        self._ik[-1] = 0.0
        if self.target is KDV:
            self.c_disp = (1.0 / 6.0 if as_printed else p.beta / 6.0) if c_disp is None else c_disp
            return
        K = kinematic_symbol(p, self.target, form)
        # K f = d_x (lin w):  lin(k) = c20 - c40 k^2 + c60 k^4
        self.lin = K.c20 - K.c40 * k ** 2 + K.c60 * k ** 4
        self.A_sym = dynamic_symbol(p, self.target)

    def _proj(self, uh):
        return self.grid.dealias_hat(uh) if self.dealias else uh

    def rhs(self, state: State1D):
        g = self.grid
        if self.target is KDV:
            return g.ifft(self._kdv_hat(state.eta)), np.zeros_like(state.w)
        p, r = self.p, self.target
        a, b, d = p.alpha, p.beta, p.delta
        eta, w = state.eta, state.w
        wh = g.fft(w)
        flux = a * eta * w
        if r is Regime.CASE2:
            flux = flux - 0.5 * a * b * eta * g.deriv_hat(wh, 2)
        if d:
            flux = flux - d * self.bath.h * w
        eta_t = self._proj(-self._ik * (self.lin * wh + g.fft(flux)))

        rhs = -eta - 0.5 * a * w * w
        if r in (Regime.CASE3ST, Regime.CASE4) and p.tau > 0:
            rhs = rhs + p.tau * p.beta * g.deriv(eta, 2)
        if r is Regime.CASE2:
            wx = g.deriv_hat(wh, 1)
            rhs = rhs - 0.5 * a * b * (wx * wx - w * g.deriv_hat(wh, 2))
            ft_h = self._picard(eta, self._proj(g.fft(rhs)))
        else:
            self.last_picard_iters = 0
            ft_h = g.invert_symbol_hat(self._proj(g.fft(rhs)), self.A_sym)
        w_t = self._ik * ft_h
        return g.ifft(eta_t), g.ifft(w_t)

    def _picard(self, eta, rhs_h):
        g, p = self.grid, self.p
        ft_h = g.invert_symbol_hat(rhs_h, self.A_sym)
        if p.alpha == 0:
            self.last_picard_iters = 0
            return ft_h
        k2 = g.kx ** 2
        ft = g.ifft(ft_h)
        last = np.inf
        for it in range(1, self.picard_max_iters + 1):
            lap = g.ifft(-p.beta * k2 * ft_h)
            new_h = g.invert_symbol_hat(rhs_h + self._proj(g.fft(p.alpha * eta * lap)), self.A_sym)
            new = g.ifft(new_h)
            upd = float(np.max(np.abs(new - ft)))
            ft_h, ft = new_h, new
            if not np.isfinite(upd):
                break
            if upd < self.picard_tol:
                self.last_picard_iters = it
                return ft_h
            last = upd
        raise PicardDiverged(self.picard_max_iters, last)

    def _kdv_hat(self, eta):
        g, p = self.grid, self.p
        eh = g.fft(eta)
        out = self._ik * eh + 0.75 * p.alpha * self._ik * g.fft(eta * eta)
        out = out + self.c_disp * (-1j * g.kx ** 3) * eh * (g.kx != g.kx[-1])
        if p.delta:
            ex = g.deriv_hat(eh, 1)
            out = out - 0.25 * p.delta * g.fft(2.0 * self.bath.h * ex + self.bath.hx * eta)
        return self._proj(-out)


def rhs1d(state: State1D, bath, p: SmallParams, r, **kw):
    """(eta_t, w_t) for a regime's 1D pair or the KdV target (w_t is zero there)."""
    return Pair1DModel(state.grid, bath, p, r, **kw).rhs(state)


def step1d(state: State1D, cfg: StepperConfig, model: Pair1DModel) -> State1D:
    g = state.grid

    def fn(fields, t):
        return model.rhs(State1D(fields[0], fields[1], t, g))

    filt = None
    if cfg.filter:
        filt = lambda u: g.ifft(g.filter_hat(g.fft(u), cfg.filter))  # noqa: E731
    eta, w = rk4_fields((state.eta, state.w), state.t, cfg.dt, fn, filt)
    return State1D(eta, w, state.t + cfg.dt, g)


def evolve1d(state: State1D, cfg: StepperConfig, model: Pair1DModel, nsteps: int, callback=None):
    for n in range(1, nsteps + 1):
        state = step1d(state, cfg, model)
        if callback is not None:
            callback(n, state)
    return state


# -- solitons ---------------------------------------------------------------

# Right-going compatibility w = eta + C1 alpha eta^2 + C2 beta eta_xx for the
# Case1 pair; confirmed by the radiation scan in the test suite.
SOLITON_C1 = -0.25
SOLITON_C2 = 1.0 / 3.0
TAIL_TOL = 1e-12


def soliton_width(amp: float, p: SmallParams) -> float:
    if not (p.alpha * amp > 0 and p.beta > 0):
        raise InvalidParameter("soliton needs alpha*amp > 0")
    return math.sqrt(4.0 * p.beta / (3.0 * p.alpha * amp))


def soliton_speed(amp: float, p: SmallParams) -> float:
    return 1.0 + 0.5 * p.alpha * amp


def soliton_profile(x, amp, p, x0, L, t=0.0):
    """sech^2 crest at x0 + c t, wrapped periodically on [0, L)."""
    width = soliton_width(amp, p)
    d = np.mod(x - x0 - soliton_speed(amp, p) * t + L / 2, L) - L / 2
    return amp / np.cosh(d / width) ** 2


def soliton_init(amp: float, p: SmallParams, x0: float, grid: Grid1D, *,
                 c1: float = SOLITON_C1, c2: float = SOLITON_C2) -> State1D:
    width = soliton_width(amp, p)
    tail = amp / math.cosh(grid.L / 2 / width) ** 2
    if tail >= TAIL_TOL:
        raise InvalidParameter(f"soliton tail {tail:.2e} at the periodic seam exceeds {TAIL_TOL:g}; "
                               "lengthen the domain")
    eta = soliton_profile(grid.x, amp, p, x0, grid.L)
    w = eta + c1 * p.alpha * eta * eta + c2 * p.beta * grid.deriv(eta, 2)
    return State1D(eta, w, 0.0, grid)


def crest_position(eta: np.ndarray, grid: Grid1D) -> float:
    """Sub-grid crest location: Newton iteration on the slope of the spectral
    interpolant, started from the largest grid value."""
    i = int(np.argmax(eta))
    eh = grid.fft(eta)
    k = grid.kx
    w = np.where(np.arange(k.size) == k.size - 1, 0.0, 1.0)

    def ev(x, order):
        m = (1j * k) ** order * w
        c = eh * m * np.exp(1j * k * x)
        return float(c[0].real + 2.0 * np.sum(c[1:]).real)

    x = grid.x[i]
    for _ in range(20):
        d1, d2 = ev(x, 1), ev(x, 2)
        if d2 == 0:
            break
        step = d1 / d2
        x -= step
        if abs(step) < 1e-13:
            break
    return float(x % grid.L)


# -- reduction check ---------------------------------------------------------

@dataclass
class ReductionReport:
    reducible: bool
    max_abs_diff: float
    max_y_variance: float
    steps: int
    regime: str
    reason: str = ""


def _y_variance(u: np.ndarray) -> float:
    return float(np.max(np.var(u, axis=0)))


def _y_invariant(u: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(u))))
    return float(np.max(np.abs(u - u[:1]))) <= 1e-14 * scale


def reduction_check(grid: Grid2D, bath, p: SmallParams, regime: Regime, eta0: np.ndarray,
                    f0: np.ndarray, *, nsteps: int = 500, dt: float | None = None,
                    form: str = "consistent", picard_tol: float = 1e-12) -> ReductionReport:
    """Evolve y-invariant 2D data and the matching 1D pair side by side."""
    spec = bath if isinstance(bath, Bathymetry) else Bathymetry.flat()
    b2 = as_sample(spec, grid)
    reasons = []
    if not (_y_invariant(eta0) and _y_invariant(f0)):
        reasons.append("initial data depend on y")
    if not _y_invariant(b2.h):
        reasons.append("bathymetry depends on y")
    if reasons:
        return ReductionReport(False, float("nan"), max(_y_variance(eta0), _y_variance(f0)),
                               0, regime.name, "; ".join(reasons))
    g1 = Grid1D(grid.nx, grid.Lx)
    dt = dt if dt is not None else 0.5 * grid.dx
    cfg = StepperConfig(dt=dt, picard_tol=picard_tol)
    m2 = PairModel(grid, b2, p, regime, form=form, picard_tol=picard_tol)
    m1 = Pair1DModel(g1, spec.sample(g1), p, regime, form=form, picard_tol=picard_tol)
    s2 = WaveState(eta0.copy(), f0.copy(), 0.0, grid)
    s1 = State1D(eta0[0].copy(), g1.deriv(f0[0], 1), 0.0, g1)
    diff = 0.0
    yvar = _y_variance(s2.eta)
    for _ in range(nsteps):
        s2 = step_rk4(s2, cfg, model=m2)
        s1 = step1d(s1, cfg, m1)
        diff = max(diff, float(np.max(np.abs(s2.eta - s1.eta[None, :]))))
        yvar = max(yvar, _y_variance(s2.eta))
    return ReductionReport(True, diff, yvar, nsteps, regime.name)
