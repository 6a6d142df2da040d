"""Rank-one detection through peripheral spectra of ``B^r A B^s``.

A nonzero ``A`` has rank one exactly when ``B^r A B^s`` has a one-point
peripheral spectrum for every ``B`` of rank at most two.  For ``rank(A) >= 2``
:func:`construct_witness` builds an explicit ``B`` whose sandwich has two
peripheral points, following the geometry of ``span{x1, x2, Ax1, Ax2}``:

* dimension 4 (``Case1``): dual functionals to the four vectors;
* dimension 3 (``Case2.SubcaseK``): ``x2 = l1 x1 + l2 Ax1 + l3 Ax2`` and a
  scaled unimodular ``alpha``;
* dimension 2 (``Case3``): ``span{x1, x2}`` is invariant and a trace-zero
  sandwich is forced on the 2x2 restriction.

Every witness is re-checked with the eigensolver before it is returned.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

import numpy as np

from .densela import DEFAULT_TOL, PeripheralSpectrum, as_matrix, peripheral_spectrum, rank
from .errors import ConstructionFailed, RankTooLow, ZeroOperator
from .products import sandwich_matrix

log = logging.getLogger(__name__)

VERIFY_TOL = 1e-8
# singular-value bands (relative) for the span dimension; values in between
# make the pair ambiguous and it is skipped
DEP_TOL = 1e-9
INDEP_TOL = 1e-5
# |lambda - 1| below this is treated as too close to the point 1
SEPARATION = 0.5
MAX_RETRIES = 1000


@dataclass(frozen=True)
class WitnessResult:
    found: bool
    B: np.ndarray = None
    spectrum: PeripheralSpectrum = None
    case_tag: str = ""
    predicted: tuple = ()
    alpha: complex = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        from .codec import matrix_to_json

        return {
            "found": self.found,
            "case": self.case_tag,
            "witness": matrix_to_json(self.B) if self.B is not None else None,
            "spectrum": self.spectrum.to_json() if self.spectrum is not None else None,
            "predicted": [[z.real, z.imag] for z in self.predicted],
        }


def _unimodular_candidates(max_q=24):
    """``exp(2 pi i j / q)`` for small q, coprime j, in a fixed order."""
    yield -1.0 + 0j
    for q in range(3, max_q + 1):
        for j in range(1, q):
            if gcd(j, q) == 1:
                yield np.exp(2j * np.pi * j / q)


def _normalized(cols):
    m = np.column_stack(cols)
    return m / np.linalg.norm(m, axis=0)


def _span_dim(cols):
    """Numerical dimension of the span, or None when it is ambiguous."""
    s = np.linalg.svd(_normalized(cols), compute_uv=False)
    rel = s / s[0]
    if np.any((rel > DEP_TOL) & (rel <= INDEP_TOL)):
        return None
    return int(np.count_nonzero(rel > INDEP_TOL))


def _image_ratio(a, x1, x2):
    s = np.linalg.svd(np.column_stack([a @ x1, a @ x2]), compute_uv=False)
    return 0.0 if s[0] == 0.0 else s[1] / s[0]


def _case1(x, r, s):
    x1, x2, x3, x4 = x
    f = np.linalg.pinv(np.column_stack(x))
    n_sum = r + s
    for alpha in _unimodular_candidates():
        if n_sum == 1:
            lam = alpha
        else:
            lam = alpha ** (n_sum - 1)
        if abs(lam - 1) > SEPARATION:
            break
    if n_sum == 1:
        # usual product: B A acts as diag(1, alpha) on span{x1, x2}
        g1, g2 = f[2], alpha * f[3]
        tag = "Case1.UsualProduct"
    else:
        g1, g2 = f[0] + f[2], alpha * f[1] + f[3]
        tag = "Case1"
    b = np.outer(x1, g1) + np.outer(x2, g2)
    return b, (1.0 + 0j, complex(lam)), tag, complex(alpha), {}


def _subcase(r, s):
    if s == 0:
        return 1
    if r == 0:
        return 2
    if r == 1 and s == 1:
        return 3
    if r == 1:
        return 4
    if s == 1:
        return 5
    return 6


def _geom_sum(mu, lo, hi, offset):
    """sum_{i=lo}^{hi} mu**(i + offset); empty when hi < lo."""
    return sum(mu ** (i + offset) for i in range(lo, hi + 1))


def _beta(sub, alpha, mu, r, s):
    if sub == 1:
        return _geom_sum(mu, 2, r, -2) * alpha
    if sub == 2:
        return _geom_sum(mu, 2, s, -2) * alpha
    if sub == 3:
        return 1.0
    if sub == 4:
        return 1.0 + _geom_sum(mu, 2, s, -1)
    if sub == 5:
        return 1.0 + _geom_sum(mu, 2, r, -1) * alpha
    return 1.0 + _geom_sum(mu, 2, s, -1) + _geom_sum(mu, 2, r, s - 2) * alpha


def _case2(a, x1, x2, r, s):
    x3, x4 = a @ x1, a @ x2
    for swap in (False, True):
        if swap:
            x1, x2, x3, x4 = x2, x1, x4, x3
        basis = np.column_stack([x1, x3, x4])
        if _span_dim([x1, x3, x4]) != 3:
            continue
        coef, *_ = np.linalg.lstsq(basis, x2, rcond=None)
        l1, l2, l3 = (complex(c) for c in coef)
        if abs(l3) * np.linalg.norm(x4) <= INDEP_TOL * np.linalg.norm(x2):
            continue
        break
    else:
        return None

    f = np.linalg.pinv(basis)
    f1, f3, f4 = f
    n_sum = r + s
    sub = _subcase(r, s)
    rho = abs(l3) ** ((1 - n_sum) / n_sum)
    for phase in _unimodular_candidates():
        alpha = rho * phase
        lam = alpha ** n_sum * l3 ** (n_sum - 1)
        if abs(lam - 1) > SEPARATION:
            break
    g1, g2 = f1 + f3, alpha * f4
    b = np.outer(x1, g1) + np.outer(x2, g2)

    c = l1 + l2
    beta = _beta(sub, alpha, alpha * l3, r, s)
    scale = max(1.0, abs(l1), abs(l2))
    if abs(c) > INDEP_TOL * scale and abs(beta) > INDEP_TOL:
        gam1, gam2 = 1.0, (lam - 1) / (c * beta)
    else:
        gam1, gam2 = 0.0, 1.0
    vec = gam1 * x1 + gam2 * x2 if r >= 1 else gam1 * x3 + gam2 * x4
    details = {
        "lambdas": (l1, l2, l3),
        "beta": complex(beta),
        "gamma": (complex(gam1), complex(gam2)),
        "eigenvector": vec,
    }
    return b, (1.0 + 0j, complex(lam)), f"Case2.Subcase{sub}", complex(alpha), details


def _matrix_root(c, k):
    w, v = np.linalg.eig(c)
    return v @ np.diag(w ** (1.0 / k)) @ np.linalg.inv(v)


def _case3(a, x1, x2, r, s, rng):
    q, _ = np.linalg.qr(np.column_stack([x1, x2]))
    a1 = q.conj().T @ a @ q
    if np.linalg.norm(a @ q - q @ a1) > INDEP_TOL * np.linalg.norm(a):
        return None
    n_sum = r + s
    c0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    # trace(B1^r A1 B1^s) = trace(A1 C) = 0 with C = B1^(r+s): eigenvalues +-mu
    c = c0 - (np.trace(a1 @ c0) / np.linalg.norm(a1) ** 2) * a1.conj().T
    det = np.linalg.det(a1) * np.linalg.det(c)
    if abs(det) <= INDEP_TOL:
        return None
    c = c / np.sqrt(abs(det))
    b1 = _matrix_root(c, n_sum)
    b = q @ b1 @ q.conj().T
    mu = np.sqrt(-np.linalg.det(a1) * np.linalg.det(c) + 0j)
    return b, (complex(mu), complex(-mu)), "Case3", None, {"restriction": a1}


def _candidate_pairs(a, rng, max_retries):
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    for i, j in combinations(range(n), 2):
        if _image_ratio(a, eye[i], eye[j]) > INDEP_TOL:
            yield eye[i], eye[j]
    for _ in range(max_retries):
        z = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        if _image_ratio(a, z[0], z[1]) > INDEP_TOL:
            yield z[0], z[1]


def _verify(a, b, r, s, predicted, tol, details):
    if rank(b, tol) > 2:
        return None
    m = sandwich_matrix(b, a, r, s)
    spec = peripheral_spectrum(m, tol)
    if len(spec) < 2:
        return None
    for z in predicted:
        if min(abs(z - w) for w in spec.points) > VERIFY_TOL:
            return None
    vec = details.get("eigenvector")
    if vec is not None:
        resid = np.linalg.norm(m @ vec - predicted[1] * vec)
        if resid > VERIFY_TOL * max(1.0, np.linalg.norm(m)) * np.linalg.norm(vec):
            return None
        details["eigenvector_residual"] = float(resid)
    return spec


def construct_witness(a, r, s, seed=0, tol=DEFAULT_TOL, max_retries=MAX_RETRIES):
    """Find ``B`` with ``rank(B) <= 2`` and at least two points in
    ``sigma_pi(B^r A B^s)``.

    Raises :class:`RankTooLow` if no two standard basis vectors have
    independent images, and :class:`ConstructionFailed` once every basis
    pair and ``max_retries`` random pairs are exhausted.
    """
    a = as_matrix(a)
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    n = a.shape[0]
    eye = np.eye(n)
    best = max(
        (_image_ratio(a, eye[i], eye[j]) for i, j in combinations(range(n), 2)),
        default=0.0,
    )
    if best <= tol:
        raise RankTooLow("operator has rank at most one")

    rng = np.random.default_rng(seed)
    attempts = 0
    for x1, x2 in _candidate_pairs(a, rng, max_retries):
        attempts += 1
        dim = _span_dim([x1, x2, a @ x1, a @ x2])
        if dim == 4:
            built = _case1([x1, x2, a @ x1, a @ x2], r, s)
        elif dim == 3:
            built = _case2(a, x1, x2, r, s)
        elif dim == 2:
            built = _case3(a, x1, x2, r, s, rng)
        else:
            built = None
        if built is None:
            continue
        b, predicted, tag, alpha, details = built
        spec = _verify(a, b, r, s, predicted, tol, details)
        if spec is not None:
            details["attempts"] = attempts
            return WitnessResult(True, b, spec, tag, predicted, alpha, details)
    raise ConstructionFailed(f"no witness after {attempts} vector pairs")


def _random_rank_le2(n, rng):
    z = rng.standard_normal((4, n)) + 1j * rng.standard_normal((4, n))
    b = np.outer(z[0], z[1])
    if rng.random() < 0.75:
        b = b + np.outer(z[2], z[3])
    return b


def rank_test(a, r, s, skew=False, sample_budget=32, seed=0, tol=DEFAULT_TOL):
    """Decide rank-one-ness from peripheral spectra; returns ``(flag, witness)``.

    ``witness`` is the :class:`WitnessResult` that refuted rank one, or None.
    """
    a = as_matrix(a)
    if not np.any(a):
        raise ZeroOperator("criterion is only defined for nonzero operators")
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    target = a.conj().T if skew else a
    try:
        return False, construct_witness(target, r, s, seed=seed, tol=tol)
    except RankTooLow:
        pass
    except ConstructionFailed as exc:
        log.debug("witness construction failed: %s", exc)

    rng = np.random.default_rng(seed)
    n = a.shape[0]
    for _ in range(sample_budget):
        b = _random_rank_le2(n, rng)
        spec = peripheral_spectrum(sandwich_matrix(b, target, r, s), tol)
        if len(spec) >= 2:
            return False, WitnessResult(True, b, spec, "randomized-fallback")
    return True, None


def is_rank_one_by_criterion(a, r, s, skew=False, sample_budget=32, seed=0, tol=DEFAULT_TOL):
    return rank_test(a, r, s, skew, sample_budget, seed, tol)[0]
