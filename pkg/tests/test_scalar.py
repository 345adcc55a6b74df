import numpy as np
import pytest

from b2p1.dynamics import StepperConfig
from b2p1.errors import InvalidParameter, TauNotNegligible, UnsupportedRegime
from b2p1.grid import Grid2D
from b2p1.jets import FunctionJet, PlaneWaveJet
from b2p1.params import Regime, SmallParams
from b2p1.scalar import (ScalarModel, ScalarState, case1_residual_direct, eta_from_f, eta_from_jet,
                         evolve_scalar, scalar_plan, scalar_residual, scalar_step)

CASES = [Regime.CASE1, Regime.CASE2, Regime.CASE3, Regime.CASE4]
FORMS = ["consistent", "printed"]


def _plane_waves(grid, r):
    out = []
    for jx, jy, amp, ph in [(1, 0, 0.4, 0.1), (2, 1, 0.3, 1.0), (1, 3, 0.2, -0.5)]:
        kx, ky = 2 * np.pi * jx / grid.Lx, 2 * np.pi * jy / grid.Ly
        out.append((kx, ky, np.sqrt(kx * kx + r * ky * ky), amp, ph))
    return out


@pytest.mark.parametrize("r", CASES)
@pytest.mark.parametrize("form", FORMS)
def test_zeroth_order_plane_waves(rect_grid, r, form, trig_bath):
    p = SmallParams(alpha=0.1, beta=0.1, gamma=0.05, delta=0.1)
    jet = PlaneWaveJet(rect_grid, _plane_waves(rect_grid, p.ratio), t=0.3)
    res = scalar_residual(jet, trig_bath, p, r, form, linear_only=True)
    assert np.max(np.abs(res)) < 1e-12


def test_plan_matches_direct_case1(rect_grid, trig_bath):
    p = SmallParams(alpha=0.1, beta=0.1, gamma=0.05, delta=0.1)
    jet = PlaneWaveJet(rect_grid, [(0.5, 0.8, 0.9, 0.3, 0.0), (1.0, 0.0, 0.4, 0.2, 0.3)], 0.2)
    a = scalar_residual(jet, trig_bath, p, Regime.CASE1)
    b = case1_residual_direct(jet, trig_bath, p)
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("r", CASES)
def test_constant_f_has_zero_residual(grid, r, trig_bath, p01):
    jet = FunctionJet(grid, lambda a, b, c, X, Y, t: np.full_like(X, 2.0) if a + b + c == 0
                      else np.zeros_like(X))
    assert not np.any(scalar_residual(jet, trig_bath, p01, r))


def test_case1_forms_coincide(rect_grid, trig_bath, p01):
    jet = PlaneWaveJet(rect_grid, [(0.5, 0.8, 0.7, 0.3, 0.0)])
    a = scalar_residual(jet, trig_bath, p01, Regime.CASE1, "consistent")
    b = scalar_residual(jet, trig_bath, p01, Regime.CASE1, "printed")
    assert np.max(np.abs(a - b)) < 1e-14


def test_order_filter_keeps_grade_zero():
    full = scalar_plan(Regime.CASE1)
    lin = scalar_plan(Regime.CASE1, order=0)
    assert 0 < len(lin) < len(full)
    assert len(scalar_plan(Regime.CASE2, linear_only=True)) == 3


def test_unsupported():
    g = Grid2D(16, 16, 1.0, 1.0)
    p = SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.1)
    with pytest.raises(UnsupportedRegime):
        ScalarModel(g, None, p, Regime.CASE2)
    with pytest.raises(UnsupportedRegime):
        scalar_plan(Regime.CASE3ST)
    with pytest.raises(InvalidParameter):
        scalar_step(ScalarState(g.zeros(), g.zeros(), 0.0, g), StepperConfig(dt=0.1))


@pytest.mark.parametrize("r", [Regime.CASE1, Regime.CASE3, Regime.CASE4])
def test_closure_residual_is_roundoff(r, trig_bath):
    # f_tt supplied by the equation itself: without the dealias projection the
    # evolved state's residual is zero up to round-off
    g = Grid2D(32, 32, 4 * np.pi, 4 * np.pi)
    X, Y = g.mesh()
    p = SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.1)
    model = ScalarModel(g, trig_bath, p, r, dealias=False)
    s = ScalarState(np.cos(X / 2) + 0.5 * np.sin(Y / 2), 0.1 * np.sin(X / 2), 0.0, g)
    s = evolve_scalar(s, StepperConfig(dt=0.02, dealias=False), model, 10)
    res = scalar_residual(model.jet(s), trig_bath, p, r)
    assert np.max(np.abs(res)) < 1e-10


def test_scalar_step_linear_wave():
    g = Grid2D(16, 16, 2 * np.pi, 2 * np.pi)
    X, _ = g.mesh()
    p = SmallParams(alpha=1e-9, beta=1e-3, gamma=1e-3, delta=0.0)
    s = ScalarState(np.cos(X), np.zeros(g.shape), 0.0, g)
    model = ScalarModel(g, None, p, Regime.CASE1)
    # omega^2 = k^2 (1 - beta k^2/3) / 1 for the Case1 linear part at k = 1
    w = np.sqrt(1 - p.beta / 3)
    s = evolve_scalar(s, StepperConfig(dt=0.01), model, 100)
    assert np.allclose(s.f, np.cos(X) * np.cos(w * 1.0), atol=1e-7)


def test_eta_recovery_leading_order(rect_grid):
    p = SmallParams(alpha=1e-8, beta=1e-8, gamma=1e-8, delta=0.0)
    X, _ = rect_grid.mesh()
    s = ScalarState(np.cos(X), np.sin(X), 0.0, rect_grid)
    for r in (Regime.CASE1, Regime.CASE2, Regime.CASE3, Regime.CASE4):
        assert np.allclose(eta_from_f(s, p, r), -np.sin(X), atol=1e-7)


def test_case4_requires_negligible_tension(rect_grid):
    p = SmallParams(alpha=0.1, beta=0.01, gamma=0.01, delta=0.01, tau=1.0)
    jet = PlaneWaveJet(rect_grid, [(0.5, 0.0, 0.5, 0.1, 0.0)])
    with pytest.raises(TauNotNegligible):
        eta_from_jet(jet, p, Regime.CASE4)
