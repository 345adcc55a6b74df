"""Derivative oracles ("jets") for f.

A jet returns the sampled field of d_x^a d_y^b d_t^c f at its time for
``a + b + c <= 8`` and ``c <= 3``.  Analytic jets (plane-wave sums or a
user callable) answer every request; a jet backed by a numerical state holds
f and f_t, plus f_tt when the governing equation supplies it.
"""
from __future__ import annotations

import numpy as np

from .errors import MissingDerivative
from .grid import Grid2D

MAX_TOTAL = 8
MAX_TIME = 3


class JetProvider:
    grid: Grid2D
    t: float

    def __init__(self, grid: Grid2D, t: float = 0.0):
        self.grid = grid
        self.t = float(t)
        self._cache = {}

    def __call__(self, a: int, b: int = 0, c: int = 0) -> np.ndarray:
        key = (int(a), int(b), int(c))
        if min(key) < 0 or sum(key) > MAX_TOTAL or key[2] > MAX_TIME:
            raise MissingDerivative(key)
        if key not in self._cache:
            self._cache[key] = self._compute(*key)
        return self._cache[key]

    def _compute(self, a, b, c):  # pragma: no cover - abstract
        raise NotImplementedError


class FunctionJet(JetProvider):
    """Analytic jet from ``fn(a, b, c, X, Y, t) -> field``."""

    def __init__(self, grid, fn, t=0.0):
        super().__init__(grid, t)
        self.fn = fn
        self._X, self._Y = grid.mesh()

    def _compute(self, a, b, c):
        return np.asarray(self.fn(a, b, c, self._X, self._Y, self.t), dtype=np.float64)


class PlaneWaveJet(JetProvider):
    """Sum of ``amp * cos(kx x + ky y - omega t + phase)`` with given (kx, ky, omega).

    ``waves`` holds tuples ``(kx, ky, omega, amp, phase)``.
    """

    def __init__(self, grid, waves, t=0.0):
        super().__init__(grid, t)
        self.waves = [tuple(float(v) for v in w) for w in waves]
        self._X, self._Y = grid.mesh()

    def _compute(self, a, b, c):
        out = np.zeros(self.grid.shape)
        for kx, ky, om, amp, ph in self.waves:
            z = amp * (1j * kx) ** a * (1j * ky) ** b * (-1j * om) ** c
            th = kx * self._X + ky * self._Y - om * self.t + ph
            out += z.real * np.cos(th) - z.imag * np.sin(th)
        return out


class StateJet(JetProvider):
    """Spatial derivatives of f, f_t (and optionally f_tt) by exact Fourier differentiation."""

    def __init__(self, grid, f, q, t=0.0, ftt=None):
        super().__init__(grid, t)
        self._hats = {0: grid.fft(f), 1: grid.fft(q)}
        if ftt is not None:
            self._hats[2] = grid.fft(ftt)

    def _compute(self, a, b, c):
        if c not in self._hats:
            raise MissingDerivative((a, b, c))
        return self.grid.deriv_hat(self._hats[c], a, b)


class SumJet(JetProvider):
    """Linear combination ``sum(w_i * jet_i)`` of jets on one grid."""

    def __init__(self, parts):
        parts = list(parts)
        grid, t = parts[0][1].grid, parts[0][1].t
        super().__init__(grid, t)
        self.parts = parts

    def _compute(self, a, b, c):
        out = np.zeros(self.grid.shape)
        for w, jet in self.parts:
            if w:
                out = out + w * jet(a, b, c)
        return out
