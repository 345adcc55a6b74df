import numpy as np
import pytest

from b2p1.cascade import (HarmonicField, HarmonicJet, PlaneWaveSpec, WaveComponent, compose,
                          correction_sources, residual_ratio, solve_all, solve_correction,
                          wave_operator, zeroth_field, zeroth_solution)
from b2p1.errors import InvalidParameter, OffGridMode, ResonantForcing
from b2p1.grid import Grid2D
from b2p1.params import Regime, SmallParams
from b2p1.scalar import scalar_residual

L = 4 * np.pi
GRID = Grid2D(32, 32, L, L)
TWO = PlaneWaveSpec((WaveComponent(1, 0, 1.0, 0.0, 1), WaveComponent(0, 1, 0.6, 0.4, 1)), L, L)


def _p(eps=0.1, delta=0.0):
    return SmallParams(alpha=eps, beta=eps, gamma=eps, delta=delta)


def test_zeroth_field_is_exact_solution():
    jet = zeroth_solution(TWO, GRID, 0.3)
    res = scalar_residual(jet, None, _p(), Regime.CASE1, linear_only=True)
    assert np.max(np.abs(res)) < 1e-13
    assert zeroth_field(TWO).conjugate_symmetric()


def test_off_grid_mode():
    spec = PlaneWaveSpec((WaveComponent(11, 0, 1.0),), L, L)
    with pytest.raises(OffGridMode):
        zeroth_field(spec, GRID)


def test_harmonic_derivative_matches_grid():
    hf = zeroth_field(TWO)
    prod = hf * hf.deriv(1)
    u = prod.evaluate(GRID, 0.2)
    assert np.allclose(prod.deriv(1, 1).evaluate(GRID, 0.2), GRID.deriv(u, 1, 1), atol=1e-12)


def test_time_derivative_of_secular_term():
    hf = HarmonicField(L, L, (1.0,), {(0, 0, (0,), 2): 1.0})  # t^2
    assert hf.deriv(0, 0, 1).evaluate(GRID, 0.5)[0, 0] == pytest.approx(1.0)
    assert hf.deriv(0, 0, 2).evaluate(GRID, 0.5)[0, 0] == pytest.approx(2.0)


@pytest.mark.parametrize("form", ["consistent", "printed"])
def test_corrections_satisfy_wave_equation(form):
    p = _p()
    f0 = zeroth_field(TWO, GRID)
    src = correction_sources(f0, None, p, form)
    corr = solve_all(f0, None, p, form=form, on_resonance="secular")
    for name in "abg":
        err = (wave_operator(corr[name], p) - src[name]).evaluate(GRID, 0.7)
        assert np.max(np.abs(err)) < 1e-12
        assert corr[name].conjugate_symmetric()


def test_nonresonant_harmonic_amplitude():
    p = _p()
    # kx = 2 pi / L = 1/2 against Omega = 2, so D = 4 - 1/4
    src = HarmonicField(L, L, (2.0,), {(1, 0, (1,), 0): 1.0, (-1, 0, (-1,), 0): 1.0})
    u = solve_correction(src, p)
    assert u.terms[(1, 0, (1,), 0)] == pytest.approx(1 / (4.0 - 0.25))


def test_self_interaction_is_resonant():
    spec = PlaneWaveSpec((WaveComponent(1, 1, 1.0),), L, L)
    f0 = zeroth_field(spec, GRID)
    src = correction_sources(f0, None, _p(), "consistent")
    with pytest.raises(ResonantForcing) as ei:
        solve_correction(src["a"], _p())
    assert ei.value.harmonic == (2, 2, (2,))


def test_bad_options():
    f0 = zeroth_field(TWO)
    with pytest.raises(InvalidParameter):
        solve_correction(f0, _p(), on_resonance="ignore")
    with pytest.raises(InvalidParameter):
        correction_sources(f0, None, _p(), "typo")
    other = HarmonicField(L, 2 * L, f0.freqs)
    with pytest.raises(InvalidParameter):
        f0 + other


def test_ratio_and_slope():
    ratios = [residual_ratio(TWO, GRID, None, _p(e), 0.5)[0] for e in (0.2, 0.1, 0.05)]
    assert ratios[1] <= 0.2
    slope = np.polyfit(np.log([0.2, 0.1, 0.05]), np.log(ratios), 1)[0]
    assert abs(slope - 1.0) < 0.3


def test_compose_weights():
    p = _p()
    f0 = zeroth_field(TWO)
    corr = {"a": f0, "b": f0._like(), "g": f0._like(), "d": f0._like()}
    total = compose(f0, corr, p)
    assert np.allclose(total.evaluate(GRID, 0.0), 1.1 * f0.evaluate(GRID, 0.0))


def test_harmonic_jet_period_check():
    with pytest.raises(OffGridMode):
        HarmonicJet(Grid2D(16, 16, 1.0, 1.0), zeroth_field(TWO))
