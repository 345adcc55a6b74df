"""Truncated vertical power series for the velocity potential.

phi(x, y, z) = sum_m (-1)^m z^(2m)/(2m)! L^m f + sum_m (-1)^m z^(2m+1)/(2m+1)! L^m F

with L = beta d_xx + gamma d_yy.  All horizontal work is spectral; the z
dependence is handled analytically, including phi_z and phi_zz.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .bathymetry import SampledBathymetry
from .errors import DerivativeOrderTooHigh
from .grid import Grid2D
from .params import Regime, SmallParams

MAX_M = 3


def _divergence(grid: Grid2D, h, fh, wx: float, wy: float) -> np.ndarray:
    """wx (h f_x)_x + wy (h f_y)_y with dealiased products; ``fh`` is spectral."""
    out = np.zeros(grid.shape)
    if wx:
        out += wx * grid.deriv(h * grid.deriv_hat(fh, 1, 0), 1, 0)
    if wy:
        out += wy * grid.deriv(h * grid.deriv_hat(fh, 0, 1), 0, 1)
    return grid.dealias(out)


def bottom_F(f: np.ndarray, bath: SampledBathymetry, p: SmallParams, r: Regime,
             grid: Grid2D) -> np.ndarray:
    """F slaved to f by the bottom condition, truncated at the regime order.

    Case1 uses the expanded product rule with the analytic bottom slopes;
    the other cases use the divergence form.  Case4 follows the displayed
    relation, whose y part carries gamma*delta.
    """
    if p.delta == 0:
        return np.zeros(grid.shape)
    fh = grid.fft(f)
    bd, gd = p.beta * p.delta, p.gamma * p.delta
    if r is Regime.CASE1:
        terms = (bath.hx * grid.deriv_hat(fh, 1, 0) + bath.hy * grid.deriv_hat(fh, 0, 1) * p.ratio
                 + bath.h * (grid.deriv_hat(fh, 2, 0) + p.ratio * grid.deriv_hat(fh, 0, 2)))
        return bd * grid.dealias(terms)
    if r in (Regime.CASE3, Regime.CASE3ST):
        return _divergence(grid, bath.h, fh, bd, 0.0)
    return _divergence(grid, bath.h, fh, bd, gd)


@dataclass(frozen=True)
class PotentialSeries:
    f: np.ndarray
    F: np.ndarray
    M: int
    p: SmallParams
    grid: Grid2D

    def __post_init__(self):
        if not 0 <= self.M <= MAX_M:
            raise DerivativeOrderTooHigh(
                f"series order M={self.M} needs derivatives beyond the resolvable cap (M <= {MAX_M})")

    def _coefficients(self):
        """Spectral coefficients c_k of z^k, k = 0 .. 2M+1."""
        g, p = self.grid, self.p
        lam = -(p.beta * g.kx[None, :] ** 2 + p.gamma * g.ky[:, None] ** 2)
        fh, Fh = g.fft(self.f), g.fft(self.F)
        out = []
        lm = np.ones_like(lam)
        for m in range(self.M + 1):
            s = (-1) ** m
            out.append(s / factorial(2 * m) * lm * fh)
            out.append(s / factorial(2 * m + 1) * lm * Fh)
            lm = lm * lam
        return out

    def _deriv_coeffs(self, dx, dy, dz):
        g = self.grid
        mult = (1j * g.kx[None, :]) ** dx * (1j * g.ky[:, None]) ** dy
        if dx % 2:
            mult[:, -1] = 0
        if dy % 2:
            mult[g.ny // 2, :] = 0
        out = []
        for k, c in enumerate(self._coefficients()):
            if k < dz:
                continue
            fall = factorial(k) // factorial(k - dz)
            out.append((k - dz, fall * mult * c))
        return out

    def eval(self, z, dx: int = 0, dy: int = 0, dz: int = 0) -> np.ndarray:
        """Derivative of phi at height ``z`` (scalar or field)."""
        if 2 * self.M + dx + dy > 8:
            raise DerivativeOrderTooHigh("requested derivative exceeds order 8")
        g = self.grid
        terms = self._deriv_coeffs(dx, dy, dz)
        if np.isscalar(z):
            acc = np.zeros(g.spectral_shape, dtype=np.complex128)
            for k, c in terms:
                acc += c * z ** k
            return g.ifft(acc)
        acc = np.zeros(g.shape)
        for k, c in terms:
            acc += g.ifft(c) * z ** k
        return acc


def phi_eval(ps: PotentialSeries, z) -> np.ndarray:
    return ps.eval(z)


def potential_residuals(ps: PotentialSeries, bath: SampledBathymetry, z_samples):
    """(max Laplace residual over ``z_samples``, max bottom-condition residual at z = delta h)."""
    p = ps.p
    lap = 0.0
    for z in z_samples:
        r = (p.beta * ps.eval(z, 2, 0) + p.gamma * ps.eval(z, 0, 2) + ps.eval(z, dz=2))
        lap = max(lap, float(np.max(np.abs(r))))
    zb = p.delta * bath.h
    bottom = (ps.eval(zb, dz=1) - p.beta * p.delta * bath.hx * ps.eval(zb, 1, 0)
              - p.gamma * p.delta * bath.hy * ps.eval(zb, 0, 1))
    return lap, float(np.max(np.abs(bottom)))
