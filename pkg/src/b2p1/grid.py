"""Periodic grids, exact Fourier differentiation and constant-coefficient solves.

Fields are plain ``float64`` arrays.  On a :class:`Grid2D` they have shape
``(ny, nx)`` so the x index is fastest in memory; on a :class:`Grid1D` they
have shape ``(n,)``.  Spectral coefficients use real-to-complex storage with
``norm="forward"`` so they are the actual Fourier amplitudes, independent of
grid size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as sfft

from . import kernels
from .errors import DerivativeOrderTooHigh, InvalidParameter, NonFiniteError, SingularSymbol

MAX_ORDER = 8


def check_finite(u: np.ndarray, what: str = "field") -> np.ndarray:
    if not np.isfinite(u).all():
        raise NonFiniteError(f"{what} contains NaN or Inf")
    return u


@dataclass(frozen=True)
class OperatorSymbol:
    """``c0 + c20 d_xx + c02 d_yy + c40 d_x^4 + c22 d_xx d_yy + c04 d_y^4 + ...`` (to order 6)."""

    c0: float = 1.0
    c20: float = 0.0
    c02: float = 0.0
    c40: float = 0.0
    c22: float = 0.0
    c04: float = 0.0
    c60: float = 0.0
    c42: float = 0.0
    c24: float = 0.0
    c06: float = 0.0

    def __call__(self, kx, ky=0.0):
        kx2, ky2 = np.square(kx), np.square(ky)
        return (self.c0 - self.c20 * kx2 - self.c02 * ky2
                + self.c40 * kx2 * kx2 + self.c22 * kx2 * ky2 + self.c04 * ky2 * ky2
                - self.c60 * kx2 ** 3 - self.c42 * kx2 * kx2 * ky2
                - self.c24 * kx2 * ky2 * ky2 - self.c06 * ky2 ** 3)

    def default_tol(self) -> float:
        return 1e-12 * max(1.0, abs(self.c0))

    def terms(self):
        """Nonzero ``((px, py), coefficient)`` pairs."""
        names = {(0, 0): self.c0, (2, 0): self.c20, (0, 2): self.c02, (4, 0): self.c40,
                 (2, 2): self.c22, (0, 4): self.c04, (6, 0): self.c60, (4, 2): self.c42,
                 (2, 4): self.c24, (0, 6): self.c06}
        return [(k, v) for k, v in names.items() if v != 0]


IDENTITY = OperatorSymbol()


class _Periodic:
    """Shared machinery; subclasses define ``shape``, ``spectral_shape`` and wavenumbers."""

    def fft(self, u: np.ndarray) -> np.ndarray:
        check_finite(u)
        return self._rfft(np.ascontiguousarray(u, dtype=np.float64))

    def ifft(self, uh: np.ndarray) -> np.ndarray:
        return self._irfft(uh)

    def deriv_hat(self, uh: np.ndarray, ox: int = 0, oy: int = 0) -> np.ndarray:
        """Physical-space derivative from spectral coefficients."""
        if ox < 0 or oy < 0 or ox + oy > MAX_ORDER:
            raise DerivativeOrderTooHigh(f"derivative order ({ox}, {oy}) exceeds {MAX_ORDER}")
        if ox == 0 and oy == 0:
            return self._irfft(uh)
        out = np.empty_like(uh)
        kernels.spectral_multiply(self._as2d(uh), *self._multipliers(ox, oy), self._as2d(out))
        return self._irfft(out)

    def deriv(self, u: np.ndarray, ox: int = 0, oy: int = 0) -> np.ndarray:
        return self.deriv_hat(self.fft(u), ox, oy)

    def symbol_values(self, sym: OperatorSymbol) -> np.ndarray:
        cache = self.__dict__.setdefault("_symcache", {})
        if sym not in cache:
            kx, ky = self._kgrid
            cache[sym] = np.ascontiguousarray(sym(kx, ky), dtype=np.float64)
        return cache[sym]

    def apply_symbol(self, u: np.ndarray, sym: OperatorSymbol) -> np.ndarray:
        return self._irfft(self.fft(u) * self.symbol_values(sym))

    def invert_symbol_hat(self, uh: np.ndarray, sym: OperatorSymbol, tol_denom=None) -> np.ndarray:
        tol = sym.default_tol() if tol_denom is None else tol_denom
        P = self.symbol_values(sym)
        out = np.empty_like(uh)
        bad = kernels.symbol_solve(self._as2d(uh), self._as2d(P), tol, self._as2d(out))
        if bad >= 0:
            idx = np.unravel_index(bad, P.shape)
            raise SingularSymbol(self._mode_of(idx), float(abs(P[idx])))
        return out

    def invert_symbol(self, u: np.ndarray, sym: OperatorSymbol, tol_denom=None) -> np.ndarray:
        """Solve ``sym(D) v = u`` mode by mode."""
        return check_finite(self._irfft(self.invert_symbol_hat(self.fft(u), sym, tol_denom)))

    def dealias_hat(self, uh: np.ndarray) -> np.ndarray:
        return uh * self._dealias_mask

    def dealias(self, u: np.ndarray) -> np.ndarray:
        """2/3 rule: zero every mode with |index| > n//3 in any direction."""
        return self._irfft(self.dealias_hat(self.fft(u)))

    def filter_hat(self, uh: np.ndarray, strength: float = 36.0, power: int = 36) -> np.ndarray:
        """Exponential filter exp(-strength (|k|/k_max)^power) per direction."""
        return uh * self._filter(strength, power)

    def integral(self, u: np.ndarray) -> float:
        return float(np.sum(u) * self.cell_area)

    def spectrum_tail_fraction(self, u: np.ndarray) -> float:
        """Energy fraction outside the 2/3 band."""
        uh = self.fft(u)
        w = self._hermitian_weights
        e = np.abs(uh) ** 2 * w
        total = e.sum()
        if total == 0:
            return 0.0
        return float(e[~self._dealias_mask].sum() / total)


def _signed(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, 1.0 / n).astype(np.int64)


@dataclass(frozen=True)
class Grid2D(_Periodic):
    nx: int
    ny: int
    Lx: float
    Ly: float

    def __post_init__(self):
        for n, name in ((self.nx, "nx"), (self.ny, "ny")):
            if n < 16 or n % 2:
                raise InvalidParameter(f"{name} must be even and >= 16, got {n}")
        if not (self.Lx > 0 and self.Ly > 0):
            raise InvalidParameter("domain lengths must be positive")

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def spectral_shape(self):
        return (self.ny, self.nx // 2 + 1)

    @property
    def dx(self):
        return self.Lx / self.nx

    @property
    def dy(self):
        return self.Ly / self.ny

    @property
    def cell_area(self):
        return self.dx * self.dy

    @cached_property
    def x(self):
        return np.arange(self.nx) * self.dx

    @cached_property
    def y(self):
        return np.arange(self.ny) * self.dy

    def mesh(self):
        """(X, Y) arrays of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y)

    @cached_property
    def jx(self):
        return np.arange(self.nx // 2 + 1)

    @cached_property
    def jy(self):
        return _signed(self.ny)

    @cached_property
    def kx(self):
        return 2 * math.pi / self.Lx * self.jx

    @cached_property
    def ky(self):
        return 2 * math.pi / self.Ly * self.jy

    @cached_property
    def _kgrid(self):
        return self.kx[None, :], self.ky[:, None]

    def _multipliers(self, ox, oy):
        key = ("m", ox, oy)
        cache = self.__dict__.setdefault("_multcache", {})
        if key not in cache:
            cache[key] = (self._mult(self.kx, ox, self.nx), self._mult(self.ky, oy, self.ny))
        return cache[key]

    def _mult(self, k, order, n):
        m = (1j * k) ** order
        if order % 2 == 1:
            m = m.copy()
            if k.shape[0] == n:  # signed y axis, Nyquist at n//2
                m[n // 2] = 0.0
            else:
                m[-1] = 0.0
        return np.ascontiguousarray(m, dtype=np.complex128)

    @staticmethod
    def _as2d(a):
        return a

    def _rfft(self, u):
        return sfft.rfft2(u, norm="forward")

    def _irfft(self, uh):
        return sfft.irfft2(uh, s=self.shape, norm="forward")

    def _mode_of(self, idx):
        return (int(self.jx[idx[1]]), int(self.jy[idx[0]]))

    @cached_property
    def _dealias_mask(self):
        mx = np.abs(self.jx) <= self.nx // 3
        my = np.abs(self.jy) <= self.ny // 3
        return my[:, None] & mx[None, :]

    def _filter(self, strength, power):
        key = ("f", strength, power)
        cache = self.__dict__.setdefault("_filtcache", {})
        if key not in cache:
            fx = np.exp(-strength * (np.abs(self.jx) / (self.nx // 2)) ** power)
            fy = np.exp(-strength * (np.abs(self.jy) / (self.ny // 2)) ** power)
            cache[key] = fy[:, None] * fx[None, :]
        return cache[key]

    @cached_property
    def _hermitian_weights(self):
        w = np.full(self.spectral_shape, 2.0)
        w[:, 0] = 1.0
        w[:, -1] = 1.0
        return w

    def zeros(self):
        return np.zeros(self.shape)


@dataclass(frozen=True)
class Grid1D(_Periodic):
    n: int
    L: float

    def __post_init__(self):
        if self.n < 16 or self.n % 2:
            raise InvalidParameter(f"n must be even and >= 16, got {self.n}")
        if not self.L > 0:
            raise InvalidParameter("domain length must be positive")

    @property
    def shape(self):
        return (self.n,)

    @property
    def dx(self):
        return self.L / self.n

    @property
    def cell_area(self):
        return self.dx

    @cached_property
    def x(self):
        return np.arange(self.n) * self.dx

    @cached_property
    def jx(self):
        return np.arange(self.n // 2 + 1)

    @cached_property
    def kx(self):
        return 2 * math.pi / self.L * self.jx

    @cached_property
    def _kgrid(self):
        return self.kx[None, :], np.zeros((1, 1))

    _ONE = np.ones(1, dtype=np.complex128)

    def _multipliers(self, ox, oy):
        if oy:
            raise DerivativeOrderTooHigh("1D fields have no y derivative")
        cache = self.__dict__.setdefault("_multcache", {})
        if ox not in cache:
            m = (1j * self.kx) ** ox
            if ox % 2 == 1:
                m = m.copy()
                m[-1] = 0.0
            cache[ox] = (np.ascontiguousarray(m, dtype=np.complex128), self._ONE)
        return cache[ox]

    @staticmethod
    def _as2d(a):
        return a.reshape(1, -1)

    def symbol_values(self, sym):
        cache = self.__dict__.setdefault("_symcache", {})
        if sym not in cache:
            cache[sym] = np.ascontiguousarray(sym(self.kx, 0.0), dtype=np.float64)
        return cache[sym]

    def _rfft(self, u):
        return sfft.rfft(u, norm="forward")

    def _irfft(self, uh):
        return sfft.irfft(uh, n=self.n, norm="forward")

    def _mode_of(self, idx):
        return (int(self.jx[idx[1]]),)

    @cached_property
    def _dealias_mask(self):
        return np.abs(self.jx) <= self.n // 3

    def _filter(self, strength, power):
        return np.exp(-strength * (self.jx / (self.n // 2)) ** power)

    @cached_property
    def _hermitian_weights(self):
        w = np.full(self.n // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w

    def zeros(self):
        return np.zeros(self.n)
