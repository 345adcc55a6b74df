import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from b2p1.errors import DerivativeOrderTooHigh, InvalidParameter, NonFiniteError, SingularSymbol
from b2p1.grid import IDENTITY, Grid1D, Grid2D, OperatorSymbol


def test_shapes_and_spacing(rect_grid):
    g = rect_grid
    assert g.shape == (32, 48)
    assert g.spectral_shape == (32, 25)
    assert g.dx == pytest.approx(12.0 / 48)
    assert g.dy == pytest.approx(8.0 / 32)
    X, Y = g.mesh()
    assert X.shape == g.shape and X[0, 1] == pytest.approx(g.dx) and Y[1, 0] == pytest.approx(g.dy)


@pytest.mark.parametrize("nx,ny", [(15, 16), (16, 8), (17, 32)])
def test_bad_sizes_rejected(nx, ny):
    with pytest.raises((InvalidParameter, ValueError)):
        Grid2D(nx, ny, 1.0, 1.0)


@pytest.mark.parametrize("ox,oy", [(1, 0), (0, 1), (2, 0), (1, 1), (3, 2), (4, 4), (0, 6)])
def test_trig_polynomial_derivatives_exact(rect_grid, ox, oy):
    g = rect_grid
    X, Y = g.mesh()
    kx, ky = 2 * np.pi * 3 / g.Lx, 2 * np.pi * 2 / g.Ly
    u = np.sin(kx * X + 0.3) * np.cos(ky * Y)
    # analytic derivative via complex form
    z1 = np.exp(1j * (kx * X + ky * Y + 0.3)) * (1j * kx) ** ox * (1j * ky) ** oy
    z2 = np.exp(1j * (kx * X - ky * Y + 0.3)) * (1j * kx) ** ox * (-1j * ky) ** oy
    exact = ((z1 + z2) / 2).imag
    # round-off is amplified by the largest resolved wavenumber to the total order
    tol = 1e-14 * (np.pi / g.dx) ** ox * (np.pi / g.dy) ** oy
    assert np.max(np.abs(g.deriv(u, ox, oy) - exact)) < max(tol, 1e-13)


def test_order_cap(grid):
    with pytest.raises(DerivativeOrderTooHigh):
        grid.deriv(grid.zeros(), 5, 4)


def test_odd_derivative_kills_nyquist(grid):
    X, _ = grid.mesh()
    nyq = np.cos(np.pi * X / grid.dx)  # alternating +-1
    assert np.max(np.abs(grid.deriv(nyq, 1, 0))) < 1e-14
    assert np.max(np.abs(grid.deriv(nyq, 2, 0) + (np.pi / grid.dx) ** 2 * nyq)) < 1e-9


def test_nonfinite_rejected(grid):
    u = grid.zeros()
    u[3, 4] = np.nan
    with pytest.raises(NonFiniteError):
        grid.fft(u)


@given(st.floats(0.1, 2.0), st.floats(0.0, 0.5), st.floats(0.0, 0.5), st.floats(0.0, 0.05))
@settings(max_examples=25, deadline=None)
def test_symbol_inversion_roundtrip(c0, c20, c02, c40):
    g = Grid2D(32, 16, 2 * np.pi, 3.0)
    sym = OperatorSymbol(c0=c0, c20=-c20, c02=-c02, c40=c40)  # 1 + c20 k^2 + ... > 0
    u = g.dealias(np.random.default_rng(1).standard_normal(g.shape))
    back = g.apply_symbol(g.invert_symbol(u, sym), sym)
    assert np.max(np.abs(back - u)) < 1e-12


def test_singular_symbol_reports_mode(grid):
    sym = OperatorSymbol(c0=0.0, c20=-1.0)  # k^2, zero at the mean mode
    with pytest.raises(SingularSymbol) as ei:
        grid.invert_symbol(np.ones(grid.shape), sym)
    assert ei.value.mode == (0, 0)


def test_singular_symbol_allowed_with_zero_rhs(grid):
    sym = OperatorSymbol(c0=0.0, c20=-1.0)
    X, _ = grid.mesh()
    v = grid.invert_symbol(np.cos(X), sym)
    assert np.allclose(v, np.cos(X), atol=1e-13)


def test_identity_symbol(grid):
    u = np.random.default_rng(0).standard_normal(grid.shape)
    assert np.allclose(grid.apply_symbol(u, IDENTITY), u, atol=1e-14)


def test_dealias_band(grid):
    X, Y = grid.mesh()
    keep = np.cos(10 * X) * np.sin(10 * Y)
    drop = np.cos(11 * X)
    assert np.max(np.abs(grid.dealias(keep) - keep)) < 1e-13
    assert np.max(np.abs(grid.dealias(drop))) < 1e-13


def test_dealias_makes_quadratic_products_exact(grid):
    rng = np.random.default_rng(3)
    a = grid.dealias(rng.standard_normal(grid.shape))
    b = grid.dealias(rng.standard_normal(grid.shape))
    prod = a * b
    # products of 2/3-band fields have no content above 2*n/3 < n: the dealiased
    # product equals the product projected, and the integral is exact
    assert grid.integral(prod) == pytest.approx(grid.integral(grid.dealias(prod)) +
                                                grid.integral(prod - grid.dealias(prod)))
    assert abs(grid.integral(prod - grid.dealias(prod))) < 1e-12


def test_integral_of_mean(rect_grid):
    assert rect_grid.integral(np.full(rect_grid.shape, 2.0)) == pytest.approx(2.0 * 12.0 * 8.0)


def test_filter_leaves_low_modes(grid):
    X, _ = grid.mesh()
    u = np.cos(2 * X)
    assert np.allclose(grid.ifft(grid.filter_hat(grid.fft(u))), u, atol=1e-12)


def test_tail_fraction(grid):
    X, _ = grid.mesh()
    assert grid.spectrum_tail_fraction(np.cos(2 * X)) < 1e-25
    assert grid.spectrum_tail_fraction(np.cos(12 * X)) == pytest.approx(1.0)


def test_grid1d_derivative(grid1d):
    x = grid1d.x
    assert np.max(np.abs(grid1d.deriv(np.sin(3 * x), 3) + 27 * np.cos(3 * x))) < 1e-9
    sym = OperatorSymbol(c0=1.0, c20=-0.5)
    u = np.cos(2 * x)
    assert np.allclose(grid1d.invert_symbol(u, sym), u / 3.0, atol=1e-14)


def test_symbol_values_match_callable(rect_grid):
    sym = OperatorSymbol(c0=1.0, c20=0.2, c02=0.1, c22=0.01, c60=0.001)
    vals = rect_grid.symbol_values(sym)
    j = (3, 5)
    assert vals[j] == pytest.approx(sym(rect_grid.kx[j[1]], rect_grid.ky[j[0]]))
