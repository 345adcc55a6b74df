"""Convergence studies shared by the ``sweep`` subcommand and the test suite.

Each study maps a small parameter ``eps`` to one measured number; the sweep
fits the log-log slope over a list of eps values.
"""
from __future__ import annotations

import math

import numpy as np

from .bathymetry import Bathymetry
from .dynamics import (PairModel, StepperConfig, WaveState, dynamic_symbol, evolve,
                       kinematic_symbol)
from .grid import Grid2D
from .params import Regime, SmallParams

STUDY_BATH = Bathymetry.trig(((1, 0, 0.3, 0.0), (0, 1, 0.0, 0.2)), h0=0.5)


def loglog_slope(xs, ys) -> float:
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _smooth_f(grid: Grid2D):
    X, Y = grid.mesh()
    kx, ky = 2 * np.pi / grid.Lx, 2 * np.pi / grid.Ly
    return np.cos(kx * X) + 0.5 * np.sin(ky * Y) + 0.3 * np.cos(kx * X + ky * Y)


def cross_check(eps: float, *, n: int = 32, L: float = 4 * np.pi, T: float = 2.0,
                dt: float = 0.02, bath=None) -> float:
    """max |eta_pair - eta_scalar| at time T for Case1 with alpha=beta=gamma=delta=eps.

    Both start from the same (f, f_t); the pair's eta(0) is the scalar recovery.
    """
    from .scalar import ScalarModel, ScalarState, eta_from_f, evolve_scalar

    g = Grid2D(n, n, L, L)
    X, Y = g.mesh()
    k = 2 * np.pi / L
    p = SmallParams(alpha=eps, beta=eps, gamma=eps, delta=eps)
    f0 = _smooth_f(g)
    q0 = k * np.sin(k * X) + 0.5 * k * np.cos(k * Y)
    s = ScalarState(f0, q0, 0.0, g)
    eta0 = eta_from_f(s, p, Regime.CASE1)
    cfg = StepperConfig(dt=dt)
    nsteps = int(round(T / dt))
    ss = evolve_scalar(s, cfg, ScalarModel(g, bath, p, Regime.CASE1), nsteps)
    sp = evolve(WaveState(eta0, f0.copy(), 0.0, g), cfg, PairModel(g, bath, p, Regime.CASE1), nsteps)
    return float(np.max(np.abs(eta_from_f(ss, p, Regime.CASE1) - sp.eta)))


def surface_tension_gap(eps: float, *, n: int = 64, L: float = 2 * np.pi) -> float:
    """sup |st_exact - st_approx| with alpha = eps, beta = gamma = 0.1, tau = 1."""
    from .surface_tension import st_approx, st_exact

    g = Grid2D(n, n, L, L)
    X, Y = g.mesh()
    eta = np.cos(X) + 0.5 * np.sin(Y) + 0.25 * np.cos(X + 2 * Y)
    p = SmallParams(alpha=eps, beta=0.1, gamma=0.1, delta=0.0, tau=1.0)
    return float(np.max(np.abs(st_exact(eta, p, g) - st_approx(eta, p, g))))


def _potential(eps: float, M: int, n: int, L: float):
    from .potential import PotentialSeries, bottom_F

    g = Grid2D(n, n, L, L)
    p = SmallParams(alpha=eps, beta=eps, gamma=eps, delta=eps)
    bath = STUDY_BATH.sample(g)
    f = _smooth_f(g)
    F = bottom_F(f, bath, p, Regime.CASE1, g)
    return PotentialSeries(f, F, M, p, g), bath


def potential_laplace(eps: float, *, M: int = 1, n: int = 32, L: float = 2 * np.pi) -> float:
    """Laplace residual of the M-truncated series, max over z in [0, 1]."""
    from .potential import potential_residuals

    ps, bath = _potential(eps, M, n, L)
    return potential_residuals(ps, bath, np.linspace(0.0, 1.0, 5))[0]


def potential_bottom(eps: float, *, M: int = 1, n: int = 32, L: float = 2 * np.pi) -> float:
    """Bottom-condition residual at z = delta h for F from the Case1 relation."""
    from .potential import potential_residuals

    ps, bath = _potential(eps, M, n, L)
    return potential_residuals(ps, bath, [0.0])[1]


def cascade(eps: float, *, n: int = 32, L: float = 4 * np.pi, t: float = 0.5) -> float:
    """Composite-to-zeroth residual ratio of the Case1 equation for two crossing modes."""
    from .cascade import PlaneWaveSpec, WaveComponent, residual_ratio

    spec = PlaneWaveSpec((WaveComponent(1, 0, 1.0, 0.0, 1), WaveComponent(0, 1, 0.6, 0.4, 1)),
                         L, L, 1.0)
    p = SmallParams(alpha=eps, beta=eps, gamma=eps, delta=0.0)
    return residual_ratio(spec, Grid2D(n, n, L, L), None, p, t)[0]


def soliton_run(p: SmallParams, target, *, n: int = 256, L: float = 80.0, amp: float = 1.0,
                t_end: float = 10.0, bath=None, form: str = "consistent",
                as_printed: bool = False, samples: int = 50):
    """Launch a soliton at L/4 and track it.

    Returns ``(rows, speed)`` with rows ``(t, crest, shape_drift)``; the drift
    is the relative L2 distance to the exact profile re-centred on the crest.
    """
    from .grid import Grid1D
    from .reduction import (Pair1DModel, crest_position, soliton_init, soliton_profile,
                            step1d)

    g = Grid1D(n, L)
    model = Pair1DModel(g, bath, p, target, form=form, as_printed=as_printed)
    s = soliton_init(amp, p, 0.25 * L, g)
    nsteps = int(round(t_end / (0.25 * g.dx)))
    cfg = StepperConfig(dt=t_end / nsteps)
    norm0 = float(np.sqrt(np.sum(s.eta ** 2)))
    every = max(1, nsteps // samples)
    rows = []
    for k in range(nsteps + 1):
        if k % every == 0 or k == nsteps:
            xc = crest_position(s.eta, g)
            drift = float(np.sqrt(np.sum((s.eta - soliton_profile(g.x, amp, p, xc, L)) ** 2)))
            rows.append((s.t, xc, drift / norm0))
        if k < nsteps:
            s = step1d(s, cfg, model)
    speed = (rows[-1][1] - rows[0][1]) % L / rows[-1][0]
    return rows, speed


STUDIES = {
    "cross-check": cross_check,
    "surface-tension": surface_tension_gap,
    "potential-laplace": potential_laplace,
    "potential-bottom": potential_bottom,
    "cascade": cascade,
}


def linear_frequency(p: SmallParams, r: Regime, jx: int, jy: int, grid: Grid2D,
                     *, form: str = "consistent", steps_per_period: int = 400):
    """Evolve one small-amplitude travelling mode of the pair for one period.

    Returns (measured omega, omega from the pair's linear symbols,
    omega of the zeroth-order equation).
    """
    kx, ky = 2 * np.pi * jx / grid.Lx, 2 * np.pi * jy / grid.Ly
    K = kinematic_symbol(p, r, form)(np.array([kx]), np.array([ky]))[0]
    A = dynamic_symbol(p, r)(np.array([kx]), np.array([ky]))[0]
    st = 1.0
    if r in (Regime.CASE3ST, Regime.CASE4):
        st += p.tau * (p.beta * kx * kx + p.gamma * ky * ky)
    # eta_t = -K f and A f_t = -(1 + tension) eta; the symbol of d_xx is -k^2
    w_pair = math.sqrt(-K * st / A)
    w0 = math.sqrt(kx * kx + p.ratio * ky * ky)
    X, Y = grid.mesh()
    amp = 1e-8
    th = kx * X + ky * Y
    f = amp * np.cos(th)
    eta = -amp * w_pair * np.sin(th)
    T = 2 * np.pi / w_pair
    cfg = StepperConfig(dt=T / steps_per_period)
    model = PairModel(grid, None, p.replace(alpha=0.0, delta=0.0), r)
    jy_idx = jy % grid.ny

    def phase(state):
        return np.angle(grid.fft(state.f)[jy_idx, jx])

    phases = [phase(WaveState(eta, f, 0.0, grid))]
    state = WaveState(eta, f, 0.0, grid)

    def cb(_, s):
        phases.append(phase(s))

    evolve(state, cfg, model, steps_per_period, cb)
    unwrapped = np.unwrap(phases)
    w_meas = -(unwrapped[-1] - unwrapped[0]) / T
    return float(w_meas), w_pair, w0
