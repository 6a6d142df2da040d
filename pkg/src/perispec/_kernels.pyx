# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled eigenvalue kernel: Householder Hessenberg reduction followed by
single-shift complex QR iteration with Wilkinson shifts."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, fabs

from perispec.errors import NoConvergence

cnp.import_array()

cdef double _EPS = 2.220446049250313e-16


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double cmod(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline double complex csqrt_(double complex z) nogil:
    cdef double r = cmod(z)
    cdef double re = sqrt(max(0.5 * (r + z.real), 0.0))
    cdef double im = sqrt(max(0.5 * (r - z.real), 0.0))
    if z.imag < 0.0:
        im = -im
    return re + 1j * im


cdef void _hessenberg(double complex[:, ::1] h, double complex[::1] v) nogil:
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double alpha, vnorm, ax0
    cdef double complex phase, w
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += cabs2(h[i, k])
        alpha = sqrt(alpha)
        if alpha == 0.0:
            continue
        ax0 = cmod(h[k + 1, k])
        if ax0 != 0.0:
            phase = h[k + 1, k] / ax0
        else:
            phase = 1.0
        m = n - k - 1
        for i in range(m):
            v[i] = h[k + 1 + i, k]
        v[0] = v[0] + phase * alpha
        vnorm = 0.0
        for i in range(m):
            vnorm += cabs2(v[i])
        vnorm = sqrt(vnorm)
        if vnorm == 0.0:
            continue
        for i in range(m):
            v[i] = v[i] / vnorm
        for j in range(n):
            w = 0.0
            for i in range(m):
                w = w + v[i].conjugate() * h[k + 1 + i, j]
            w = 2.0 * w
            for i in range(m):
                h[k + 1 + i, j] = h[k + 1 + i, j] - v[i] * w
        for i in range(n):
            w = 0.0
            for j in range(m):
                w = w + h[i, k + 1 + j] * v[j]
            w = 2.0 * w
            for j in range(m):
                h[i, k + 1 + j] = h[i, k + 1 + j] - w * v[j].conjugate()
        for i in range(k + 2, n):
            h[i, k] = 0.0


cdef int _qr(double complex[:, ::1] h, double complex[::1] out,
             double[::1] cs_c, double complex[::1] cs_s, long max_sweeps) nogil:
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t hi = n - 1, lo, k, i, j, top
    cdef long its = 0, sweeps = 0
    cdef double tst, ax, ay, nrm, c
    cdef double complex mu, p, q, r, t, half, disc, mu1, mu2, s, sc, u, w, x, y
    while hi >= 0:
        if hi == 0:
            out[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            tst = cmod(h[lo - 1, lo - 1]) + cmod(h[lo, lo])
            if tst == 0.0:
                for i in range(hi + 1):
                    for j in range(hi + 1):
                        tst += cmod(h[i, j])
            if cmod(h[lo, lo - 1]) <= _EPS * tst:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            out[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue

        sweeps += 1
        its += 1
        if sweeps > max_sweeps:
            return -1

        if its % 10 == 0:
            mu = h[hi, hi] + 0.75 * cmod(h[hi, hi - 1])
        else:
            p = h[hi - 1, hi - 1]
            q = h[hi - 1, hi]
            r = h[hi, hi - 1]
            t = h[hi, hi]
            half = 0.5 * (p - t)
            disc = csqrt_(half * half + q * r)
            mu1 = 0.5 * (p + t) + disc
            mu2 = 0.5 * (p + t) - disc
            if cmod(mu1 - t) < cmod(mu2 - t):
                mu = mu1
            else:
                mu = mu2

        for k in range(lo, hi + 1):
            h[k, k] = h[k, k] - mu
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            ax = cmod(x)
            ay = cmod(y)
            if ay == 0.0:
                c = 1.0
                s = 0.0
            elif ax == 0.0:
                c = 0.0
                s = y.conjugate() / ay
            else:
                nrm = hypot(ax, ay)
                c = ax / nrm
                s = (x / ax) * y.conjugate() / nrm
            cs_c[k] = c
            cs_s[k] = s
            for j in range(k, hi + 1):
                u = h[k, j]
                w = h[k + 1, j]
                h[k, j] = c * u + s * w
                h[k + 1, j] = -s.conjugate() * u + c * w
        for k in range(lo, hi):
            c = cs_c[k]
            s = cs_s[k]
            sc = s.conjugate()
            top = k + 2
            if top > hi:
                top = hi
            for i in range(lo, top + 1):
                u = h[i, k]
                w = h[i, k + 1]
                h[i, k] = c * u + sc * w
                h[i, k + 1] = -s * u + c * w
        for k in range(lo, hi + 1):
            h[k, k] = h[k, k] + mu
    return 0


def hqr_eigvals(a, long max_sweeps=-1):
    """Eigenvalues of a square complex matrix by shifted QR on Hessenberg form.

    ``max_sweeps`` caps the total number of QR sweeps (default ``100 * n``).
    """
    cdef double complex[:, ::1] h = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = h.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n == 0:
        return out
    if max_sweeps < 0:
        max_sweeps = 100 * n
    cdef double complex[::1] outv = out
    cdef double complex[::1] work = np.empty(n, dtype=np.complex128)
    cdef double[::1] cs_c = np.empty(n, dtype=np.float64)
    cdef double complex[::1] cs_s = np.empty(n, dtype=np.complex128)
    cdef int status
    with nogil:
        _hessenberg(h, work)
        status = _qr(h, outv, cs_c, cs_s, max_sweeps)
    if status != 0:
        raise NoConvergence(f"QR iteration exceeded {max_sweeps} sweeps")
    return out
