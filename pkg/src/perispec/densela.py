"""Dense complex matrices, eigenvalues and peripheral spectra.

Matrices are plain ``numpy`` complex128 arrays; :func:`as_matrix` is the
validating constructor used at every public boundary.
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InvalidMatrix

DEFAULT_TOL = 1e-9
# Relative singular-value cutoff used to split off the numerical null space
# before the QR sweep (see ``_deflate_kernel``).
KERNEL_RTOL = 1e-11


def as_matrix(a, n=None):
    """Validate ``a`` as a finite square complex matrix and return a complex128 copy."""
    try:
        arr = np.array(a, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"not a numeric matrix: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise InvalidMatrix(f"expected dimension {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has non-finite entries")
    return arr


@dataclass(frozen=True)
class PeripheralSpectrum:
    """Points of maximal modulus in the spectrum, deduplicated within ``tol``."""

    points: tuple
    radius: float
    tol: float

    def __post_init__(self):
        if not self.points:
            raise ValueError("peripheral spectrum is never empty")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def is_singleton(self):
        return len(self.points) == 1

    def to_json(self):
        return {
            "points": [[z.real, z.imag] for z in self.points],
            "radius": self.radius,
        }


@dataclass(frozen=True)
class RankOneOperator:
    """The operator ``z -> f(z) x``; ``f`` is a row covector (no conjugation)."""

    x: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128).ravel()
        f = np.asarray(self.f, dtype=np.complex128).ravel()
        if x.shape != f.shape:
            raise InvalidMatrix("vector and covector lengths differ")
        if not (np.any(x) and np.any(f)):
            raise InvalidMatrix("rank-one operator needs nonzero x and f")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "f", f)

    @property
    def n(self):
        return self.x.size

    def pairing(self):
        """``<x, f> = f(x)``."""
        return complex(self.f @ self.x)

    def matrix(self):
        return np.outer(self.x, self.f)


def eigenvalues(a, backend=None):
    """All eigenvalues of ``a`` with algebraic multiplicity.

    Raises :class:`~perispec.errors.NoConvergence` when the QR sweep cap
    (``100 * n``) is exceeded.
    """
    a = as_matrix(a)
    return _backend.kernel(backend)(a)


def _deflate_kernel(a):
    """Compress away the numerical null space, repeatedly.

    If ``a ~ U S V^H`` has numerical rank ``k < n`` then the nonzero
    eigenvalues of ``a`` are those of the ``k x k`` matrix ``S V^H U``.
    Iterating strips nilpotent structure at zero, whose eigenvalues a QR
    sweep would otherwise smear into a ring of radius ``~eps**(1/j)``.
    Returns the compressed core and the number of zero eigenvalues removed.
    """
    if a.size == 0 or not np.any(a):
        return a[:0, :0], a.shape[0]
    cutoff = None
    zeros = 0
    core = a
    while core.shape[0]:
        u, s, vh = np.linalg.svd(core)
        if cutoff is None:
            cutoff = KERNEL_RTOL * s[0]
        k = int(np.count_nonzero(s > cutoff))
        if k == core.shape[0]:
            break
        zeros += core.shape[0] - k
        core = (s[:k, None] * vh[:k]) @ u[:, :k]
    return core, zeros


def spectrum(a, backend=None):
    """Eigenvalues of ``a`` with exact zeros for the numerically nilpotent part."""
    a = as_matrix(a)
    core, zeros = _deflate_kernel(a)
    eig = _backend.kernel(backend)(core) if core.shape[0] else np.zeros(0, complex)
    return np.concatenate([eig, np.zeros(zeros, dtype=np.complex128)])


def _cluster(values, radius):
    """Single-linkage clusters of ``values`` within ``radius``; returns centroids."""
    values = list(values)
    seen = [False] * len(values)
    out = []
    for i in range(len(values)):
        if seen[i]:
            continue
        seen[i] = True
        group = [values[i]]
        stack = [i]
        while stack:
            j = stack.pop()
            for k in range(len(values)):
                if not seen[k] and abs(values[k] - values[j]) <= radius:
                    seen[k] = True
                    group.append(values[k])
                    stack.append(k)
        out.append(complex(np.mean(group)))
    return out


def peripheral_from_eigenvalues(eig, tol=DEFAULT_TOL):
    eig = np.asarray(eig, dtype=np.complex128)
    if eig.size == 0:
        return PeripheralSpectrum((0j,), 0.0, tol)
    mods = np.abs(eig)
    radius = float(mods.max())
    if radius == 0.0:
        return PeripheralSpectrum((0j,), 0.0, tol)
    thresh = tol * max(1.0, radius)
    ring = eig[np.abs(mods - radius) <= thresh]
    points = tuple(sorted(_cluster(ring, thresh), key=lambda z: (np.angle(z), abs(z))))
    return PeripheralSpectrum(points, radius, tol)


def peripheral_spectrum(a, tol=DEFAULT_TOL, backend=None):
    """``{z in sigma(a) : |z| = r(a)}`` as a deduplicated point set.

    Membership is ``| |z| - r | <= tol * max(1, r)``; points closer than that
    are merged into their centroid.  The zero matrix gives ``{0}``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return peripheral_from_eigenvalues(spectrum(a, backend), tol)


def _perfect_matching(adj, n):
    match = [-1] * n

    def augment(i, visited):
        for j in adj[i]:
            if j in visited:
                continue
            visited.add(j)
            if match[j] < 0 or augment(match[j], visited):
                match[j] = i
                return True
        return False

    return all(augment(i, set()) for i in range(n))


def spectra_equal(s1, s2, tol=DEFAULT_TOL):
    """True iff the two point sets match one-to-one within ``tol * max(1, r)``."""
    p1, p2 = list(s1.points), list(s2.points)
    if len(p1) != len(p2):
        return False
    thresh = tol * max(1.0, s1.radius, s2.radius)
    adj = [[j for j, w in enumerate(p2) if abs(z - w) <= thresh] for z in p1]
    # greedy pass first; the matching search only runs when greedy stalls
    used = set()
    for row in adj:
        free = [j for j in row if j not in used]
        if not free:
            break
        used.add(free[0])
    else:
        return True
    return _perfect_matching(adj, len(p1))


def rank(a, tol=DEFAULT_TOL):
    """Numerical rank: singular values above ``tol * s_max``."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def spectral_radius(a, backend=None):
    eig = spectrum(a, backend)
    return float(np.abs(eig).max()) if eig.size else 0.0
