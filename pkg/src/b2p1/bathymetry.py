"""Bottom profiles h(x, y) and their sampled slopes.

Flat, tent, piecewise-linear and trigonometric profiles carry analytic
slopes; a profile given as raw grid values is differentiated spectrally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BathymetryError, NonHarmonicBathymetry
from .grid import Grid1D, Grid2D

KINDS = ("flat", "tent", "piecewise", "trig", "grid")


@dataclass(frozen=True)
class Bathymetry:
    """Declarative bottom description; ``sample`` evaluates it on a grid.

    kind-specific parameters

    * ``flat``: ``h0``
    * ``tent``: ``amp``, ``center`` (fraction of Lx, default 0.5), ``base``
    * ``piecewise``: ``points`` as ``((x_frac, h), ...)`` closing periodically
    * ``trig``: ``h0`` and ``terms`` as ``((jx, jy, a_cos, a_sin), ...)``
    * ``grid``: ``values`` array with the grid's shape
    """

    kind: str = "flat"
    h0: float = 1.0
    amp: float = 1.0
    center: float = 0.5
    base: float = 0.0
    points: tuple = ()
    terms: tuple = ()
    values: object = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BathymetryError(f"unknown bathymetry kind {self.kind!r}; expected {KINDS}")
        if self.kind == "piecewise":
            pts = self.points
            if len(pts) < 2:
                raise BathymetryError("piecewise bottom needs at least two points")
            xs = [float(x) for x, _ in pts]
            if xs[0] != 0.0 or xs[-1] != 1.0 or any(b <= a for a, b in zip(xs, xs[1:])):
                raise BathymetryError(
                    "piecewise points must be strictly increasing from x=0 to x=1 (fractions of Lx)")
            if float(pts[0][1]) != float(pts[-1][1]):
                raise BathymetryError(
                    "piecewise bottom does not close periodically: h(0) != h(Lx); "
                    "add a return segment (tent) to window it")
        if self.kind == "grid" and self.values is None:
            raise BathymetryError("grid bathymetry needs sampled values")

    @classmethod
    def flat(cls, h0: float = 1.0) -> "Bathymetry":
        return cls("flat", h0=h0)

    @classmethod
    def tent(cls, amp: float = 1.0, center: float = 0.5, base: float = 0.0) -> "Bathymetry":
        return cls("tent", amp=amp, center=center, base=base)

    @classmethod
    def trig(cls, terms, h0: float = 0.0) -> "Bathymetry":
        return cls("trig", h0=h0, terms=tuple(tuple(t) for t in terms))

    @classmethod
    def piecewise(cls, points) -> "Bathymetry":
        return cls("piecewise", points=tuple((float(x), float(h)) for x, h in points))

    @classmethod
    def from_values(cls, values) -> "Bathymetry":
        return cls("grid", values=np.asarray(values, dtype=np.float64))

    @property
    def y_invariant(self) -> bool:
        if self.kind == "trig":
            return all(int(t[1]) == 0 for t in self.terms)
        if self.kind == "grid":
            v = np.asarray(self.values)
            return v.ndim == 1 or bool(np.all(v == v[:1]))
        return True

    def harmonics(self):
        """``[(jx, jy, c)]`` with h = sum c exp(i(kx x + ky y)); flat and trig kinds only."""
        if self.kind == "flat":
            return [(0, 0, complex(self.h0))]
        if self.kind != "trig":
            raise NonHarmonicBathymetry(
                f"{self.kind} bathymetry has no finite harmonic expansion; "
                "use the time-stepped correction path")
        out = {}

        def put(j, c):
            out[j] = out.get(j, 0) + c

        put((0, 0), complex(self.h0))
        for jx, jy, a, b in self.terms:
            jx, jy = int(jx), int(jy)
            if (jx, jy) == (0, 0):
                put((0, 0), complex(a))
                continue
            put((jx, jy), complex(a, -b) / 2)
            put((-jx, -jy), complex(a, b) / 2)
        return [(jx, jy, c) for (jx, jy), c in sorted(out.items()) if c != 0]

    def sample(self, grid) -> "SampledBathymetry":
        return sample_bathymetry(self, grid)


@dataclass(frozen=True)
class SampledBathymetry:
    h: np.ndarray
    hx: np.ndarray
    hy: np.ndarray
    spec: Bathymetry

    @property
    def flat(self) -> bool:
        return self.spec.kind == "flat"

    def check_depth(self, delta: float) -> None:
        """The bottom must stay below the undisturbed surface: delta*max|h| < 1."""
        if delta * float(np.max(np.abs(self.h))) >= 1.0:
            raise BathymetryError(f"delta*max|h| = {delta * np.max(np.abs(self.h)):.3g} >= 1")


def _coords(grid):
    if isinstance(grid, Grid2D):
        X, Y = grid.mesh()
        return X, Y, grid.Lx, grid.Ly
    if isinstance(grid, Grid1D):
        return grid.x, None, grid.L, None
    raise TypeError(f"unsupported grid {grid!r}")


def sample_bathymetry(spec: Bathymetry, grid) -> SampledBathymetry:
    """h and its slopes on ``grid``; analytic slopes where the kind permits."""
    X, Y, Lx, Ly = _coords(grid)
    zeros = np.zeros(grid.shape)
    kind = spec.kind
    if kind == "flat":
        h, hx, hy = np.full(grid.shape, float(spec.h0)), zeros, zeros.copy()
    elif kind == "tent":
        d = np.mod(X - spec.center * Lx + Lx / 2, Lx) - Lx / 2
        h = spec.base + spec.amp * (1.0 - 2.0 * np.abs(d) / Lx)
        # one-sided slopes average to zero at the two kinks
        hx = -spec.amp * 2.0 / Lx * np.sign(d)
        hx = np.where(np.isclose(np.abs(d), Lx / 2), 0.0, hx)
        hy = zeros
    elif kind == "piecewise":
        xs = np.array([p[0] for p in spec.points]) * Lx
        hs = np.array([p[1] for p in spec.points])
        h = np.interp(X, xs, hs)
        slopes = np.diff(hs) / np.diff(xs)
        seg = np.clip(np.searchsorted(xs, X, side="right") - 1, 0, len(slopes) - 1)
        hx = slopes[seg]
        on_knot = np.isclose(X[..., None], xs[None, :-1], atol=1e-12 * Lx).any(axis=-1)
        if on_knot.any():
            left = slopes[(seg - 1) % len(slopes)]
            hx = np.where(on_knot, 0.5 * (hx + left), hx)
        hy = zeros
    elif kind == "trig":
        h = np.full(grid.shape, float(spec.h0))
        hx = zeros.copy()
        hy = zeros.copy()
        for jx, jy, a, b in spec.terms:
            jx, jy = int(jx), int(jy)
            if Y is None and jy != 0:
                raise BathymetryError("y-dependent trig term on a 1D grid")
            nx = grid.nx if isinstance(grid, Grid2D) else grid.n
            if abs(jx) > nx // 3 or (Y is not None and abs(jy) > grid.ny // 3):
                raise BathymetryError(f"trig mode ({jx}, {jy}) outside the 2/3 band")
            kx = 2 * math.pi * jx / Lx
            ky = 2 * math.pi * jy / Ly if Y is not None else 0.0
            th = kx * X + (ky * Y if Y is not None else 0.0)
            c, s = np.cos(th), np.sin(th)
            h = h + a * c + b * s
            hx = hx + kx * (b * c - a * s)
            hy = hy + ky * (b * c - a * s)
    else:
        h = np.asarray(spec.values, dtype=np.float64)
        if h.shape != grid.shape:
            if h.ndim == 1 and isinstance(grid, Grid2D) and h.shape == (grid.nx,):
                h = np.broadcast_to(h, grid.shape).copy()
            else:
                raise BathymetryError(f"grid bathymetry shape {h.shape} != grid shape {grid.shape}")
        hx = grid.deriv(h, 1, 0)
        hy = grid.deriv(h, 0, 1) if isinstance(grid, Grid2D) else zeros
    h = np.ascontiguousarray(h, dtype=np.float64)
    if float(np.max(np.abs(h))) > 1.0 + 1e-12:
        raise BathymetryError(f"max|h| = {np.max(np.abs(h)):.4g} exceeds the normalization 1")
    return SampledBathymetry(h, np.ascontiguousarray(hx, dtype=np.float64),
                             np.ascontiguousarray(hy, dtype=np.float64), spec)


def flat_sample(grid) -> SampledBathymetry:
    return sample_bathymetry(Bathymetry.flat(), grid)
