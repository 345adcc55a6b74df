# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Same signatures as ``_kernels_py``."""
from libc.math cimport sqrt, fabs, isfinite

ctypedef double complex cplx


def spectral_multiply(cplx[:, ::1] uh, cplx[::1] mx, cplx[::1] my, cplx[:, ::1] out):
    """out[j, i] = uh[j, i] * mx[i] * my[j]"""
    cdef Py_ssize_t j, i, ny = uh.shape[0], nx = uh.shape[1]
    cdef cplx m
    with nogil:
        for j in range(ny):
            m = my[j]
            for i in range(nx):
                out[j, i] = uh[j, i] * (mx[i] * m)


def symbol_solve(cplx[:, ::1] uh, double[:, ::1] P, double tol, cplx[:, ::1] out):
    """out = uh / P; returns the flat index of the first singular mode or -1."""
    cdef Py_ssize_t j, i, ny = uh.shape[0], nx = uh.shape[1]
    cdef Py_ssize_t bad = -1
    cdef double p
    with nogil:
        for j in range(ny):
            for i in range(nx):
                p = P[j, i]
                if fabs(p) >= tol:
                    out[j, i] = uh[j, i] / p
                else:
                    out[j, i] = 0
                    if bad < 0 and sqrt(uh[j, i].real * uh[j, i].real
                                        + uh[j, i].imag * uh[j, i].imag) >= tol:
                        bad = j * nx + i
    return bad


def st_exact_core(double[:, ::1] ex, double[:, ::1] ey, double[:, ::1] exx,
                  double[:, ::1] eyy, double[:, ::1] exy, double a2, double beta,
                  double gamma, double tau, double[:, ::1] out):
    """Pointwise exact surface-tension pressure; returns the minimum denominator base."""
    cdef Py_ssize_t j, i, ny = ex.shape[0], nx = ex.shape[1]
    cdef double sx, sy, den, num, dmin = 1e300
    with nogil:
        for j in range(ny):
            for i in range(nx):
                sx = ex[j, i] * ex[j, i]
                sy = ey[j, i] * ey[j, i]
                den = 1.0 + a2 * beta * sx + a2 * gamma * sy
                if den < dmin:
                    dmin = den
                num = (beta * (1.0 + a2 * beta * sy) * exx[j, i]
                       + gamma * (1.0 + a2 * beta * sx) * eyy[j, i]
                       - 2.0 * a2 * beta * gamma * ex[j, i] * ey[j, i] * exy[j, i])
                out[j, i] = -tau * num / (den * sqrt(den))
    return dmin


def axpy(double[::1] y, double a, double[::1] k, double[::1] out):
    """out = y + a*k on flattened arrays."""
    cdef Py_ssize_t i, n = y.shape[0]
    with nogil:
        for i in range(n):
            out[i] = y[i] + a * k[i]


def rk4_combine(double[::1] y, double[::1] k1, double[::1] k2, double[::1] k3,
                double[::1] k4, double dt, double[::1] out):
    """out = y + dt/6 (k1 + 2 k2 + 2 k3 + k4); returns False if any value is non-finite."""
    cdef Py_ssize_t i, n = y.shape[0]
    cdef double h = dt / 6.0, v
    cdef bint ok = True
    with nogil:
        for i in range(n):
            v = y[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not isfinite(v):
                ok = False
            out[i] = v
    return ok
