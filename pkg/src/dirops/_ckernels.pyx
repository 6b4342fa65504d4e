# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: exact and compensated reductions, one-sided Jacobi SVD."""

import math

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot, isfinite, frexp, ldexp
from libc.float cimport DBL_EPSILON
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline void _neumaier(double x, double* s, double* c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def fsum(const double[::1] x):
    """Correctly rounded sum (Shewchuk partials, same result as ``math.fsum``)."""
    cdef Py_ssize_t i, j, k, n = x.shape[0], used = 0
    cdef double v, y, hi, lo, tmp
    cdef bint finite = True
    if n == 0:
        return 0.0
    cdef double* partials = <double*> malloc((n + 1) * sizeof(double))
    if partials == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                v = x[i]
                if not isfinite(v):
                    finite = False
                    break
                k = 0
                for j in range(used):
                    y = partials[j]
                    if fabs(v) < fabs(y):
                        tmp = v
                        v = y
                        y = tmp
                    hi = v + y
                    lo = y - (hi - v)
                    if lo != 0.0:
                        partials[k] = lo
                        k += 1
                    v = hi
                if not isfinite(v):
                    finite = False
                    break
                partials[k] = v
                used = k + 1
            hi = 0.0
            lo = 0.0
            if finite and used > 0:
                used -= 1
                hi = partials[used]
                while used > 0:
                    v = hi
                    used -= 1
                    y = partials[used]
                    hi = v + y
                    lo = y - (hi - v)
                    if lo != 0.0:
                        break
                # round half to even across the remaining partials
                if used > 0 and ((lo < 0 and partials[used - 1] < 0) or
                                 (lo > 0 and partials[used - 1] > 0)):
                    y = lo * 2.0
                    v = hi + y
                    if y == v - hi:
                        hi = v
    finally:
        free(partials)
    if not finite:
        return math.fsum(x)
    return hi


def csum(const double complex[::1] z):
    cdef Py_ssize_t i, n = z.shape[0]
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    with nogil:
        for i in range(n):
            _neumaier(z[i].real, &sr, &cr)
            _neumaier(z[i].imag, &si, &ci)
    return complex(sr + cr, si + ci)


cdef inline double complex _cdot(const double complex[::1] a,
                                 const double complex[::1] b,
                                 bint conj_b) noexcept nogil:
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0
    cdef double ar, ai, br, bi
    for i in range(n):
        ar = a[i].real
        ai = a[i].imag
        br = b[i].real
        bi = -b[i].imag if conj_b else b[i].imag
        _neumaier(ar * br - ai * bi, &sr, &cr)
        _neumaier(ar * bi + ai * br, &si, &ci)
    return (sr + cr) + 1j * (si + ci)


def cdot(const double complex[::1] a, const double complex[::1] b, bint conj_b=True):
    """sum_i a_i * conj(b_i) (or a_i * b_i), compensated, ascending i."""
    if a.shape[0] != b.shape[0]:
        raise ValueError("length mismatch")
    cdef double complex r
    with nogil:
        r = _cdot(a, b, conj_b)
    return complex(r.real, r.imag)


def cmatvec(const double complex[:, ::1] A, const double complex[::1] x):
    """Row-wise compensated A @ x."""
    cdef Py_ssize_t k, K = A.shape[0]
    if A.shape[1] != x.shape[0]:
        raise ValueError("dimension mismatch")
    out = np.empty(K, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for k in range(K):
            o[k] = _cdot(A[k], x, False)
    return out


def jacobi_singular_values(A, double tol=1e-13, int max_sweeps=80):
    """One-sided (Hestenes) Jacobi on the columns of ``A``.

    Returns ``(sigmas, sweeps, off)`` with ``sigmas`` sorted descending and
    ``off`` the largest normalised column inner product at exit.
    """
    A = np.asarray(A, dtype=np.complex128)
    cdef int e = 0
    amax = float(np.max(np.abs(A))) if A.size else 0.0
    if amax > 0:
        # exact power-of-two scaling keeps squared column norms in range
        frexp(amax, &e)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] W = np.ascontiguousarray(np.ldexp(1.0, -e) * A.T)
    cdef double complex[:, ::1] w = W
    cdef Py_ssize_t n = W.shape[0], m = W.shape[1]
    cdef Py_ssize_t p, q, i
    cdef int sweep = 0
    cdef double alpha, beta, scale, g, gr, gi, zeta, t, c, s, er, ei, off = 0.0
    cdef double xr, xi, yr, yi, tiny = 1e-300
    cdef double complex x, y
    # pairs whose inner product is at rounding level of the whole matrix are
    # left alone; noise columns would otherwise rotate forever
    cdef double floor = 16.0 * DBL_EPSILON * DBL_EPSILON * float(
        np.sum(W.real ** 2 + W.imag ** 2)
    )
    with nogil:
        while sweep < max_sweeps:
            sweep += 1
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    alpha = 0.0
                    beta = 0.0
                    gr = 0.0
                    gi = 0.0
                    for i in range(m):
                        xr = w[p, i].real
                        xi = w[p, i].imag
                        yr = w[q, i].real
                        yi = w[q, i].imag
                        alpha += xr * xr + xi * xi
                        beta += yr * yr + yi * yi
                        gr += xr * yr + xi * yi
                        gi += xr * yi - xi * yr
                    if alpha < tiny or beta < tiny:
                        continue
                    g = hypot(gr, gi)
                    # sqrt(alpha) * sqrt(beta): the product alpha * beta can underflow
                    scale = sqrt(alpha) * sqrt(beta)
                    if g <= tol * scale or g <= floor:
                        continue
                    if g / scale > off:
                        off = g / scale
                    zeta = (beta - alpha) / (2.0 * g)
                    if zeta >= 0:
                        t = 1.0 / (zeta + hypot(1.0, zeta))
                    else:
                        t = -1.0 / (-zeta + hypot(1.0, zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    # rotate y by exp(-i phase) so that x^H y is real
                    er = gr / g
                    ei = -gi / g
                    for i in range(m):
                        x = w[p, i]
                        yr = w[q, i].real * er - w[q, i].imag * ei
                        yi = w[q, i].real * ei + w[q, i].imag * er
                        w[p, i] = (c * x.real - s * yr) + 1j * (c * x.imag - s * yi)
                        w[q, i] = (s * x.real + c * yr) + 1j * (s * x.imag + c * yi)
            if off == 0.0:
                break
    sig = np.ldexp(np.sqrt(np.sum(W.real ** 2 + W.imag ** 2, axis=1)), e)
    sig = np.sort(sig)[::-1]
    return sig, sweep, off
