import numpy as np
import pytest

from b2p1.bathymetry import Bathymetry
from b2p1.dynamics import (PairModel, StepperConfig, WaveState, cfl_dt, check_form, diagnostics,
                           dynamic_symbol, evolve, kinematic_symbol, rhs, step_rk4)
from b2p1.errors import InvalidParameter, NonFiniteState, PicardDiverged
from b2p1.grid import Grid2D
from b2p1.params import Regime, SmallParams
from b2p1.studies import linear_frequency

ALL = [Regime.CASE1, Regime.CASE2, Regime.CASE3, Regime.CASE3ST, Regime.CASE4]


def _gauss(g, amp=0.1):
    X, Y = g.mesh()
    return amp * np.exp(-((X - g.Lx / 2) ** 2 + (Y - g.Ly / 2) ** 2))


@pytest.fixture
def g():
    return Grid2D(32, 32, 12.0, 12.0)


def _params(r):
    tau = 1.0 if r is Regime.CASE3ST else 0.0
    return SmallParams(alpha=0.1, beta=0.1, gamma=0.05, delta=0.1, tau=tau)


@pytest.mark.parametrize("r", ALL)
def test_rest_stays_at_rest(g, r, trig_bath):
    s = WaveState.rest(g)
    s2 = step_rk4(s, StepperConfig(dt=0.05), trig_bath, _params(r), r)
    assert not s2.eta.any() and not s2.f.any()
    assert s2.t == pytest.approx(0.05)


@pytest.mark.parametrize("r", ALL)
def test_mass_conserved(g, r, trig_bath):
    p = _params(r)
    model = PairModel(g, trig_bath, p, r)
    s = WaveState(_gauss(g), np.zeros(g.shape), 0.0, g)
    m0 = g.integral(s.eta)
    s = evolve(s, StepperConfig(dt=0.05), model, 20)
    assert abs(g.integral(s.eta) - m0) < 1e-12


@pytest.mark.parametrize("r", ALL)
def test_y_invariance_preserved(r):
    g = Grid2D(32, 16, 12.0, 6.0)
    X, _ = g.mesh()
    bath = Bathymetry.trig(((1, 0, 0.3, 0.0),), h0=0.2)
    s = WaveState(0.1 * np.cos(2 * np.pi * X / g.Lx), np.zeros(g.shape), 0.0, g)
    s = evolve(s, StepperConfig(dt=0.05), PairModel(g, bath, _params(r), r), 10)
    assert np.max(np.abs(s.eta - s.eta[:1, :])) < 1e-13


@pytest.mark.parametrize("r", ALL)
def test_linear_dispersion(r):
    g = Grid2D(16, 16, 2 * np.pi, 2 * np.pi)
    p = SmallParams(alpha=0.1, beta=0.05, gamma=0.02, delta=0.0, tau=0.5)
    w, w_pair, _ = linear_frequency(p, r, 2, 1, g, steps_per_period=200)
    assert w == pytest.approx(w_pair, rel=1e-6)


def test_symbols_shape_and_form():
    p = SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.1)
    kc = kinematic_symbol(p, Regime.CASE2, "consistent")
    kp = kinematic_symbol(p, Regime.CASE2, "printed")
    assert kc.c60 == -kp.c60 != 0
    assert dynamic_symbol(p, Regime.CASE1).c40 == 0
    assert dynamic_symbol(p, Regime.CASE2).c40 == pytest.approx(0.01 / 24)


def test_free_function_rhs_matches_model(g, trig_bath):
    p = _params(Regime.CASE1)
    s = WaveState(_gauss(g), 0.1 * _gauss(g), 0.0, g)
    a = rhs(s, trig_bath, p, Regime.CASE1)
    b = PairModel(g, trig_bath, p, Regime.CASE1).rhs(s)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_exact_tension_close_to_approx(g):
    p = SmallParams(alpha=0.01, beta=0.1, gamma=0.1, delta=0.0, tau=1.0)
    s = WaveState(_gauss(g), np.zeros(g.shape), 0.0, g)
    a = PairModel(g, None, p, Regime.CASE3ST, st_mode="approx").rhs(s)[1]
    e = PairModel(g, None, p, Regime.CASE3ST, st_mode="exact").rhs(s)[1]
    assert np.max(np.abs(a - e)) < 1e-5


def test_picard_divergence_reported(g):
    p = SmallParams(alpha=0.5, beta=0.5, gamma=0.5, delta=0.0)
    model = PairModel(g, None, p, Regime.CASE2, picard_tol=1e-30, picard_max_iters=2)
    X, _ = g.mesh()
    s = WaveState(np.cos(2 * np.pi * X / g.Lx), np.sin(2 * np.pi * X / g.Lx), 0.0, g)
    with pytest.raises(PicardDiverged):
        model.rhs(s)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blowup_raises_nonfinite(g):
    s = WaveState(_gauss(g), np.zeros(g.shape), 0.0, g)
    s.f[0, 0] = 1e308
    with pytest.raises(NonFiniteState):
        step_rk4(s, StepperConfig(dt=10.0), None, _params(Regime.CASE1), Regime.CASE1)


@pytest.mark.parametrize("kw", [dict(dt=0.0), dict(dt=0.1, picard_tol=0.0),
                                dict(dt=0.1, picard_max_iters=0)])
def test_stepper_config_validation(kw):
    with pytest.raises(InvalidParameter):
        StepperConfig(**kw)


def test_bad_options(g):
    p = _params(Regime.CASE1)
    with pytest.raises(InvalidParameter):
        PairModel(g, None, p, Regime.CASE1, st_mode="cubic")
    with pytest.raises(InvalidParameter):
        check_form("typo")


def test_diagnostics_and_cfl(g):
    d = diagnostics(WaveState(np.ones(g.shape), np.zeros(g.shape), 0.0, g))
    assert d["mass"] == pytest.approx(144.0)
    assert d["l2_eta"] == pytest.approx(12.0)
    assert d["linf_eta"] == 1.0
    assert cfl_dt(g, 0.5) == pytest.approx(0.5 * 12.0 / 32)


def test_filter_damps_high_modes(g):
    X, _ = g.mesh()
    s = WaveState(0.01 * np.cos(2 * np.pi * 10 * X / g.Lx), np.zeros(g.shape), 0.0, g)
    p = _params(Regime.CASE1)
    plain = step_rk4(s, StepperConfig(dt=0.01), None, p, Regime.CASE1)
    damped = step_rk4(s, StepperConfig(dt=0.01, filter=36.0), None, p, Regime.CASE1)
    assert np.max(np.abs(damped.eta)) < np.max(np.abs(plain.eta))
