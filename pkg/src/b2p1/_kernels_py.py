"""NumPy implementations of the compiled kernels (used when the extension is absent)."""
import numpy as np


def spectral_multiply(uh, mx, my, out):
    np.multiply(uh, my[:, None] * mx[None, :], out=out)


def symbol_solve(uh, P, tol, out):
    small = np.abs(P) < tol
    with np.errstate(divide="ignore", invalid="ignore"):
        np.divide(uh, np.where(small, 1.0, P), out=out)
    out[small] = 0
    bad = small & (np.abs(uh) >= tol)
    if bad.any():
        return int(np.flatnonzero(bad)[0])
    return -1


def st_exact_core(ex, ey, exx, eyy, exy, a2, beta, gamma, tau, out):
    sx = ex * ex
    sy = ey * ey
    den = 1.0 + a2 * beta * sx + a2 * gamma * sy
    num = (beta * (1.0 + a2 * beta * sy) * exx
           + gamma * (1.0 + a2 * beta * sx) * eyy
           - 2.0 * a2 * beta * gamma * ex * ey * exy)
    np.divide(-tau * num, den * np.sqrt(den), out=out)
    return float(den.min())


def axpy(y, a, k, out):
    np.add(y, a * k, out=out)


def rk4_combine(y, k1, k2, k3, k4, dt, out):
    h = dt / 6.0
    np.add(y, h * (k1 + 2.0 * k2 + 2.0 * k3 + k4), out=out)
    return bool(np.isfinite(out).all())
