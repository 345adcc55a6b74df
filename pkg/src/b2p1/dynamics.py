"""Time evolution of the (eta, f) Boussinesq pairs on a periodic 2D grid.

The kinematic condition is transposed for ``eta_t``.  Every term of it is a
spatial divergence, so it is assembled as ``-K f - div(q)`` with a constant
linear symbol ``K`` and a flux ``q``; the mean of ``eta_t`` is then zero to
round-off.  The dynamic condition is linear in ``f_t`` through a constant
symbol ``A``; Case2 adds variable-coefficient ``eta * f_..t`` terms that are
resolved by Picard iteration.
"""
from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bathymetry import Bathymetry, SampledBathymetry
from .errors import InvalidParameter, NonFiniteError, NonFiniteState, PicardDiverged
from .grid import Grid2D, OperatorSymbol
from .params import Regime, SmallParams
from .surface_tension import st_approx, st_exact

FORMS = ("consistent", "printed")


def check_form(form: str) -> str:
    if form not in FORMS:
        raise InvalidParameter(f"form must be one of {FORMS}, got {form!r}")
    return form


@dataclass
class WaveState:
    eta: np.ndarray
    f: np.ndarray
    t: float
    grid: Grid2D

    def copy(self) -> "WaveState":
        return WaveState(self.eta.copy(), self.f.copy(), self.t, self.grid)

    @classmethod
    def rest(cls, grid: Grid2D, t: float = 0.0) -> "WaveState":
        return cls(grid.zeros(), grid.zeros(), t, grid)


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    picard_tol: float = 1e-12
    picard_max_iters: int = 50
    filter: float | None = None
    dealias: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameter(f"dt must be positive, got {self.dt}")
        if not self.picard_tol > 0:
            raise InvalidParameter("picard_tol must be positive")
        if self.picard_max_iters < 1:
            raise InvalidParameter("picard_max_iters must be >= 1")


def short_wave_warnings(grid, p: SmallParams) -> list:
    """Advisory notes when the grid resolves waves far outside the long-wave band.

    The pair stays linearly stable there, but its dispersion is no longer a
    faithful approximation once beta k_max^2 (or gamma k_max^2) exceeds one.
    """
    out = []
    kx = math.pi / grid.dx
    if p.beta * kx * kx > 1:
        out.append(f"beta*kx_max^2={p.beta * kx * kx:.3g} > 1: shortest resolved x-waves lie "
                   "outside the long-wave band; consider the spectral filter")
    if hasattr(grid, "dy"):
        ky = math.pi / grid.dy
        if p.gamma * ky * ky > 1:
            out.append(f"gamma*ky_max^2={p.gamma * ky * ky:.3g} > 1: shortest resolved y-waves "
                       "lie outside the long-wave band; consider the spectral filter")
    return out


def cfl_dt(grid, courant: float = 0.5) -> float:
    """Advisory step for the unit-speed wave operator: dt = C * dx."""
    dx = min(grid.dx, getattr(grid, "dy", grid.dx))
    return courant * dx


def as_sample(bath, grid) -> SampledBathymetry:
    if bath is None:
        return Bathymetry.flat().sample(grid)
    if isinstance(bath, Bathymetry):
        return bath.sample(grid)
    return bath


# -- linear symbols ---------------------------------------------------------

def kinematic_symbol(p: SmallParams, r: Regime, form: str = "consistent") -> OperatorSymbol:
    """Constant linear part ``K`` of the kinematic condition, eta_t + K f + ... = 0."""
    b, g, q = p.beta, p.gamma, p.ratio
    s6 = 1.0 if form == "consistent" else -1.0
    if r in (Regime.CASE3, Regime.CASE3ST):
        return OperatorSymbol(c0=0.0, c20=1.0, c02=q, c40=-b / 6, c22=-g / 3, c60=s6 * b * b / 120)
    base = dict(c0=0.0, c20=1.0, c02=q, c40=-b / 6, c22=-g / 3, c04=-g * q / 6)
    if r is Regime.CASE2:
        base.update(c60=s6 * b * b / 120, c42=s6 * b * g / 40, c24=s6 * g * g / 40,
                    c06=s6 * g * g * q / 120)
    return OperatorSymbol(**base)


def dynamic_symbol(p: SmallParams, r: Regime) -> OperatorSymbol:
    """Constant operator ``A`` acting on f_t in the dynamic condition."""
    b, g = p.beta, p.gamma
    if r is Regime.CASE2:
        return OperatorSymbol(c0=1.0, c20=-b / 2, c02=-g / 2, c40=b * b / 24,
                              c22=b * g / 12, c04=g * g / 24)
    if r in (Regime.CASE3, Regime.CASE3ST):
        return OperatorSymbol(c0=1.0, c20=-b / 2, c02=-g / 2, c40=b * b / 24)
    return OperatorSymbol(c0=1.0, c20=-b / 2, c02=-g / 2)


class PairModel:
    """Right-hand side of one regime's pair on one grid.

    Holds the precomputed symbols; stateless across calls otherwise.
    """

    def __init__(self, grid: Grid2D, bath, p: SmallParams, regime: Regime, *,
                 st_mode: str = "approx", form: str = "consistent", dealias: bool = True,
                 picard_tol: float = 1e-12, picard_max_iters: int = 50):
        self.grid = grid
        self.bath = as_sample(bath, grid)
        self.p = p
        self.regime = regime
        self.form = check_form(form)
        if st_mode not in ("approx", "exact"):
            raise InvalidParameter(f"st_mode must be 'approx' or 'exact', got {st_mode!r}")
        self.st_mode = st_mode
        self.dealias = dealias
        self.picard_tol = picard_tol
        self.picard_max_iters = picard_max_iters
        self.K = grid.symbol_values(kinematic_symbol(p, regime, form))
        self.A_sym = dynamic_symbol(p, regime)
        self.last_picard_iters = 0
        self._ikx = np.ascontiguousarray(1j * grid.kx[None, :] * np.ones((grid.ny, 1)))
        self._ikx[:, -1] = 0
        self._iky = np.ascontiguousarray(1j * grid.ky[:, None] * np.ones((1, grid.nx // 2 + 1)))
        self._iky[grid.ny // 2, :] = 0

    # helpers
    def _proj(self, uh):
        return self.grid.dealias_hat(uh) if self.dealias else uh

    def _has_tension(self) -> bool:
        return self.regime in (Regime.CASE3ST, Regime.CASE4) and self.p.tau > 0

    def surface_tension(self, eta):
        fn = st_exact if self.st_mode == "exact" else st_approx
        return fn(eta, self.p, self.grid)

    def eta_t_hat(self, eta, fh):
        g, p, r = self.grid, self.p, self.regime
        a, b, gm, q, d = p.alpha, p.beta, p.gamma, p.ratio, p.delta
        D = g.deriv_hat
        fx = D(fh, 1, 0)
        qx = a * eta * fx
        qy = None
        if r not in (Regime.CASE3, Regime.CASE3ST):
            qy = a * q * eta * D(fh, 0, 1)
        if r is Regime.CASE2:
            qx = qx - 0.5 * a * eta * (b * D(fh, 3, 0) + gm * D(fh, 1, 2))
            qy = qy - 0.5 * a * gm * eta * D(fh, 2, 1)
            if self.form == "consistent":
                qy = qy - 0.5 * a * gm * q * eta * D(fh, 0, 3)
        if d:
            qx = qx - d * self.bath.h * fx
            if qy is not None:
                qy = qy - d * q * self.bath.h * D(fh, 0, 1)
        out = -self.K * fh - self._ikx * g.fft(qx)
        if qy is not None:
            out = out - self._iky * g.fft(qy)
        return self._proj(out)

    def f_t_hat(self, eta, fh):
        g, p, r = self.grid, self.p, self.regime
        a, b, gm, q = p.alpha, p.beta, p.gamma, p.ratio
        D = g.deriv_hat
        fx = D(fh, 1, 0)
        rhs = -eta - 0.5 * a * fx * fx
        if r not in (Regime.CASE3, Regime.CASE3ST):
            fy = D(fh, 0, 1)
            rhs = rhs - 0.5 * a * q * fy * fy
        if self._has_tension():
            rhs = rhs - self.surface_tension(eta)
        if r is Regime.CASE2:
            fy = D(fh, 0, 1)
            fxx, fyy = D(fh, 2, 0), D(fh, 0, 2)
            cq = 0.5 if self.form == "consistent" else 1.0
            rhs = (rhs - 0.5 * a * b * (fxx * fxx - fx * D(fh, 3, 0))
                   - a * gm * (fxx * fyy - 0.5 * fx * D(fh, 1, 2) - 0.5 * fy * D(fh, 2, 1))
                   - cq * a * gm * q * (fyy * fyy - fy * D(fh, 0, 3)))
            return self._picard(eta, self._proj(g.fft(rhs)))
        self.last_picard_iters = 0
        return g.invert_symbol_hat(self._proj(g.fft(rhs)), self.A_sym)

    def _picard(self, eta, rhs_h):
        """Solve A f_t = R + alpha eta (beta f_xxt + s gamma f_yyt) by fixed-point iteration."""
        g, p = self.grid, self.p
        sg = 1.0 if self.form == "consistent" else -1.0
        kx2 = g.kx[None, :] ** 2
        ky2 = g.ky[:, None] ** 2
        ft_h = g.invert_symbol_hat(rhs_h, self.A_sym)
        if p.alpha == 0:
            self.last_picard_iters = 0
            return ft_h
        ft = g.ifft(ft_h)
        last = np.inf
        for it in range(1, self.picard_max_iters + 1):
            lap = g.ifft(-(p.beta * kx2 + sg * p.gamma * ky2) * ft_h)
            corr = self._proj(g.fft(p.alpha * eta * lap))
            new_h = g.invert_symbol_hat(rhs_h + corr, self.A_sym)
            new = g.ifft(new_h)
            upd = float(np.max(np.abs(new - ft)))
            ft_h, ft = new_h, new
            if not np.isfinite(upd):
                break
            if upd < self.picard_tol:
                self.last_picard_iters = it
                return ft_h
            last = upd
        raise PicardDiverged(self.picard_max_iters, last if np.isfinite(last) else float("inf"))

    def rhs(self, state: WaveState):
        g = self.grid
        fh = g.fft(state.f)
        eta = state.eta
        et = g.ifft(self.eta_t_hat(eta, fh))
        ft = g.ifft(self.f_t_hat(eta, fh))
        return et, ft


def rhs(state: WaveState, bath, p: SmallParams, r: Regime, st_mode: str = "approx", *,
        form: str = "consistent", dealias: bool = True, picard_tol: float = 1e-12,
        picard_max_iters: int = 50):
    """(eta_t, f_t) for the regime's pair."""
    model = PairModel(state.grid, bath, p, r, st_mode=st_mode, form=form, dealias=dealias,
                      picard_tol=picard_tol, picard_max_iters=picard_max_iters)
    return model.rhs(state)


def _flat(u):
    return np.ascontiguousarray(u).reshape(-1)


def rk4_fields(fields, t, dt, fn, filter_fn=None):
    """One classical RK4 step on a tuple of arrays; ``fn(fields, t)`` returns derivatives."""
    def stage(base, k, a):
        out = []
        for y, kk in zip(base, k):
            o = np.empty_like(y)
            kernels.axpy(_flat(y), a, _flat(kk), o.reshape(-1))
            out.append(o)
        return out

    try:
        k1 = fn(fields, t)
        k2 = fn(stage(fields, k1, dt / 2), t + dt / 2)
        k3 = fn(stage(fields, k2, dt / 2), t + dt / 2)
        k4 = fn(stage(fields, k3, dt), t + dt)
    except NonFiniteError as exc:
        raise NonFiniteState(f"RK4 stage produced a non-finite field: {exc}") from exc
    new = []
    for y, a, b, c, d in zip(fields, k1, k2, k3, k4):
        out = np.empty_like(y)
        if not kernels.rk4_combine(*map(_flat, (y, a, b, c, d)), dt, out.reshape(-1)):
            raise NonFiniteState(f"non-finite state after RK4 step at t={t + dt:.6g}")
        new.append(out)
    if filter_fn is not None:
        new = [filter_fn(u) for u in new]
    return new


def _filter(grid, strength):
    if not strength:
        return None
    return lambda u: grid.ifft(grid.filter_hat(grid.fft(u), strength))


def step_rk4(state: WaveState, cfg: StepperConfig, bath=None, p: SmallParams | None = None,
             r: Regime | None = None, st_mode: str = "approx", *, form: str = "consistent",
             model: PairModel | None = None) -> WaveState:
    """Advance by one RK4 step of size ``cfg.dt``."""
    if model is None:
        model = PairModel(state.grid, bath, p, r, st_mode=st_mode, form=form,
                          dealias=cfg.dealias, picard_tol=cfg.picard_tol,
                          picard_max_iters=cfg.picard_max_iters)
    g = state.grid

    def fn(fields, t):
        return model.rhs(WaveState(fields[0], fields[1], t, g))

    eta, f = rk4_fields((state.eta, state.f), state.t, cfg.dt, fn, _filter(g, cfg.filter))
    return WaveState(eta, f, state.t + cfg.dt, g)


def evolve(state: WaveState, cfg: StepperConfig, model: PairModel, nsteps: int, callback=None):
    """Take ``nsteps`` steps; ``callback(step, state)`` runs after each."""
    for n in range(1, nsteps + 1):
        state = step_rk4(state, cfg, model=model)
        if callback is not None:
            callback(n, state)
    return state


def diagnostics(state) -> dict:
    g = state.grid
    eta = state.eta
    return {
        "mass": g.integral(eta),
        "l2_eta": float(np.sqrt(g.integral(eta * eta))),
        "linf_eta": float(np.max(np.abs(eta))) if eta.size else 0.0,
        "spectrum_tail_fraction": g.spectrum_tail_fraction(eta),
    }
