"""Surface-tension pressure in the dynamic surface condition.

``st_exact`` evaluates the full curvature expression in scaled variables,
``st_approx`` its second-order truncation ``-tau (beta eta_xx + gamma eta_yy)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SlopeTooLarge
from .grid import Grid2D, check_finite
from .params import SmallParams

SLOPE_GUARD = 0.5


def st_exact(eta: np.ndarray, p: SmallParams, grid: Grid2D) -> np.ndarray:
    """Exact curvature term.

    The numerator's eta_yy coefficient follows the unexpanded scaled display,
    ``gamma (1 + alpha^2 beta eta_x^2)``; the denominator is raised to 3/2
    pointwise and the result is dealiased once.
    """
    if p.tau == 0:
        return np.zeros(grid.shape)
    eh = grid.fft(eta)
    ex, ey = grid.deriv_hat(eh, 1, 0), grid.deriv_hat(eh, 0, 1)
    exx, eyy, exy = grid.deriv_hat(eh, 2, 0), grid.deriv_hat(eh, 0, 2), grid.deriv_hat(eh, 1, 1)
    out = np.empty(grid.shape)
    den_min = kernels.st_exact_core(ex, ey, exx, eyy, exy, p.alpha ** 2,
                                    p.beta, p.gamma, p.tau, out)
    if den_min < SLOPE_GUARD:
        raise SlopeTooLarge(f"slope denominator {den_min:.3g} below guard {SLOPE_GUARD}")
    return check_finite(grid.dealias(out), "surface tension")


def st_approx(eta: np.ndarray, p: SmallParams, grid) -> np.ndarray:
    if p.tau == 0:
        return np.zeros(grid.shape)
    eh = grid.fft(eta)
    lap = p.beta * grid.deriv_hat(eh, 2, 0)
    if isinstance(grid, Grid2D):
        lap = lap + p.gamma * grid.deriv_hat(eh, 0, 2)
    return -p.tau * lap


@dataclass(frozen=True)
class SurfaceTensionTerm:
    mode: str = "approx"

    def __post_init__(self):
        if self.mode not in ("exact", "approx"):
            raise ValueError(f"surface tension mode must be 'exact' or 'approx', got {self.mode!r}")

    def __call__(self, eta, p, grid):
        return (st_exact if self.mode == "exact" else st_approx)(eta, p, grid)
