"""Pure-Python eigenvalue kernel.

Line-for-line twin of ``_kernels.pyx``; used when the compiled extension is
unavailable or ``PERISPEC_BACKEND=python`` is set.  Works on nested lists of
Python ``complex`` because scalar indexing into numpy arrays is slower.
"""
import math

import numpy as np

from .errors import NoConvergence

_EPS = 2.0 ** -52


def _csqrt(z):
    r = abs(z)
    re = math.sqrt(max(0.5 * (r + z.real), 0.0))
    im = math.sqrt(max(0.5 * (r - z.real), 0.0))
    if z.imag < 0.0:
        im = -im
    return complex(re, im)


def _hessenberg(h, n):
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += abs(h[i][k]) ** 2
        alpha = math.sqrt(alpha)
        if alpha == 0.0:
            continue
        x0 = h[k + 1][k]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = [h[i][k] for i in range(k + 1, n)]
        v[0] += phase * alpha
        vnorm = math.sqrt(sum(abs(t) ** 2 for t in v))
        if vnorm == 0.0:
            continue
        v = [t / vnorm for t in v]
        # H <- (I - 2 v v^H) H
        for j in range(n):
            w = 0j
            for i in range(len(v)):
                w += v[i].conjugate() * h[k + 1 + i][j]
            w *= 2.0
            for i in range(len(v)):
                h[k + 1 + i][j] -= v[i] * w
        # H <- H (I - 2 v v^H)
        for i in range(n):
            row = h[i]
            w = 0j
            for j in range(len(v)):
                w += row[k + 1 + j] * v[j]
            w *= 2.0
            for j in range(len(v)):
                row[k + 1 + j] -= w * v[j].conjugate()
        for i in range(k + 2, n):
            h[i][k] = 0j


def hqr_eigvals(a, max_sweeps=-1):
    """Eigenvalues of a square complex matrix by shifted QR on Hessenberg form.

    ``max_sweeps`` caps the total number of QR sweeps (default ``100 * n``).
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    if n == 0:
        return out
    if max_sweeps < 0:
        max_sweeps = 100 * n
    h = [[complex(v) for v in row] for row in a]
    _hessenberg(h, n)

    hi = n - 1
    its = 0
    sweeps = 0
    while hi >= 0:
        if hi == 0:
            out[0] = h[0][0]
            break
        lo = hi
        while lo > 0:
            tst = abs(h[lo - 1][lo - 1]) + abs(h[lo][lo])
            if tst == 0.0:
                tst = sum(abs(h[i][j]) for i in range(hi + 1) for j in range(hi + 1))
            if abs(h[lo][lo - 1]) <= _EPS * tst:
                h[lo][lo - 1] = 0j
                break
            lo -= 1
        if lo == hi:
            out[hi] = h[hi][hi]
            hi -= 1
            its = 0
            continue

        sweeps += 1
        its += 1
        if sweeps > max_sweeps:
            raise NoConvergence(f"QR iteration exceeded {max_sweeps} sweeps")

        if its % 10 == 0:
            mu = h[hi][hi] + 0.75 * abs(h[hi][hi - 1])
        else:
            p, q = h[hi - 1][hi - 1], h[hi - 1][hi]
            r, t = h[hi][hi - 1], h[hi][hi]
            half = 0.5 * (p - t)
            disc = _csqrt(half * half + q * r)
            mu1 = 0.5 * (p + t) + disc
            mu2 = 0.5 * (p + t) - disc
            mu = mu1 if abs(mu1 - t) < abs(mu2 - t) else mu2

        for k in range(lo, hi + 1):
            h[k][k] -= mu
        cs = []
        for k in range(lo, hi):
            x, y = h[k][k], h[k + 1][k]
            ax, ay = abs(x), abs(y)
            if ay == 0.0:
                c, s = 1.0, 0j
            elif ax == 0.0:
                c, s = 0.0, y.conjugate() / ay
            else:
                nrm = math.hypot(ax, ay)
                c = ax / nrm
                s = (x / ax) * y.conjugate() / nrm
            cs.append((c, s))
            rk, rk1 = h[k], h[k + 1]
            for j in range(k, hi + 1):
                u, w = rk[j], rk1[j]
                rk[j] = c * u + s * w
                rk1[j] = -s.conjugate() * u + c * w
        for k in range(lo, hi):
            c, s = cs[k - lo]
            sc = s.conjugate()
            for i in range(lo, min(k + 2, hi) + 1):
                row = h[i]
                u, w = row[k], row[k + 1]
                row[k] = c * u + sc * w
                row[k + 1] = -s * u + c * w
        for k in range(lo, hi + 1):
            h[k][k] += mu
    return out
