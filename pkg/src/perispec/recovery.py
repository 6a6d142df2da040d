"""Preservation checks and canonical-form recovery for linear maps on matrices.

A map is tabulated by its images of the matrix units ``E_ij``.  Recovery
searches the finitely many admissible scalars (roots of unity, or +-1 in the
Hilbert model) and, for each, solves the homogeneous linear system
``Phi(E_ij) T = lam T E_ij`` (or ``E_ij^t``) for ``T``.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .codec import complex_to_json, matrix_from_json, matrix_to_json
from .densela import DEFAULT_TOL, as_matrix, peripheral_spectrum, spectra_equal
from .errors import (
    DimensionMismatch,
    InconsistentWithLemma,
    InvalidMatrix,
    NotLinearConsistent,
    SpanDeficient,
    ZeroOperator,
)
from .products import evaluate, evaluate_skew


class Form(str, Enum):
    SIMILARITY = "Similarity"
    TRANSPOSE_SIMILARITY = "TransposeSimilarity"
    UNITARY_SIMILARITY = "UnitarySimilarity"
    UNITARY_TRANSPOSE_SIMILARITY = "UnitaryTransposeSimilarity"
    NON_STANDARD = "NonStandard"


class WignerKind(str, Enum):
    UNITARY = "unitary"
    ANTIUNITARY = "antiunitary"
    NEITHER = "neither"


def matrix_unit(n, i, j):
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True)
class LinearMapTable:
    """``images[i*n_in + j] = Phi(E_ij)``; Phi is extended linearly."""

    n_in: int
    n_out: int
    images: tuple

    def __post_init__(self):
        imgs = tuple(as_matrix(m) for m in self.images)
        if len(imgs) != self.n_in ** 2:
            raise DimensionMismatch(f"need {self.n_in ** 2} images, got {len(imgs)}")
        if any(m.shape[0] != self.n_out for m in imgs):
            raise DimensionMismatch(f"every image must be {self.n_out}x{self.n_out}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(
            self,
            "_tensor",
            np.stack(imgs).reshape(self.n_in, self.n_in, self.n_out, self.n_out),
        )

    def __call__(self, a):
        a = as_matrix(a)
        if a.shape[0] != self.n_in:
            raise DimensionMismatch(f"map acts on {self.n_in}x{self.n_in} matrices")
        return np.einsum("ij,ijkl->kl", a, self._tensor)

    @classmethod
    def from_callable(cls, fn, n_in, check_trials=4, seed=0, tol=DEFAULT_TOL):
        """Tabulate ``fn`` on matrix units, then spot-check linearity."""
        images = [as_matrix(fn(matrix_unit(n_in, i, j))) for i in range(n_in) for j in range(n_in)]
        table = cls(n_in, images[0].shape[0], tuple(images))
        rng = np.random.default_rng(seed)
        for _ in range(check_trials):
            a = rng.standard_normal((n_in, n_in)) + 1j * rng.standard_normal((n_in, n_in))
            direct = as_matrix(fn(a))
            if direct.shape != (table.n_out, table.n_out):
                raise NotLinearConsistent("callback changes output dimension")
            expect = table(a)
            if np.linalg.norm(direct - expect) > tol * max(1.0, np.linalg.norm(expect)) * 1e3:
                raise NotLinearConsistent("callback disagrees with its linear extension")
        return table

    def to_json(self):
        return {
            "n_in": self.n_in,
            "n_out": self.n_out,
            "images": [matrix_to_json(m) for m in self.images],
        }

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or not {"n_in", "n_out", "images"} <= obj.keys():
            raise InvalidMatrix('map JSON needs "n_in", "n_out" and "images"')
        return cls(int(obj["n_in"]), int(obj["n_out"]), tuple(matrix_from_json(m) for m in obj["images"]))


def standard_map(t, lam=1.0, transpose=False):
    """Table of ``A -> lam T A T^-1`` (or with ``A^t``)."""
    t = as_matrix(t)
    tinv = np.linalg.inv(t)
    n = t.shape[0]

    def fn(a):
        return lam * t @ (a.T if transpose else a) @ tinv

    return LinearMapTable(n, n, tuple(fn(matrix_unit(n, i, j)) for i in range(n) for j in range(n)))


def unitary_map(u, c=1.0, transpose=False):
    """Table of ``A -> c U A U^*`` (or with ``A^t``)."""
    u = as_matrix(u)
    n = u.shape[0]

    def fn(a):
        return c * u @ (a.T if transpose else a) @ u.conj().T

    return LinearMapTable(n, n, tuple(fn(matrix_unit(n, i, j)) for i in range(n) for j in range(n)))


def embedding_fixture():
    """``M_2 -> M_3``, ``A -> A (+) 0``: preserves every peripheral spectrum of
    generalized products but its range misses most rank-two operators."""

    def fn(a):
        out = np.zeros((3, 3), dtype=np.complex128)
        out[:2, :2] = a
        return out

    return LinearMapTable(2, 3, tuple(fn(matrix_unit(2, i, j)) for i in range(2) for j in range(2)))


# --- preservation ----------------------------------------------------------


def _gaussian(n, rng):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def structured_tuples(k, n, rng):
    """Matrix units, rank-one pairs and identity paddings, in a fixed order."""
    eye = np.eye(n, dtype=np.complex128)
    units = [matrix_unit(n, i, j) for i in range(n) for j in range(n)]
    yield tuple(eye for _ in range(k))
    for slot in range(k):
        for e in units:
            yield tuple(e if q == slot else eye for q in range(k))
    for _ in range(2 * k):
        yield tuple(units[rng.integers(len(units))] for _ in range(k))
    for _ in range(2 * k):
        ops = []
        for _ in range(k):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            ops.append(np.outer(x, f))
        yield tuple(ops)
    for slot in range(k):
        yield tuple(_gaussian(n, rng) if q == slot else eye for q in range(k))


def sample_tuples(k, n, trials, rng):
    """``trials`` operand tuples: the structured ones first, then Gaussian."""
    count = 0
    for ops in structured_tuples(k, n, rng):
        if count >= trials:
            return
        yield ops
        count += 1
    while count < trials:
        yield tuple(_gaussian(n, rng) for _ in range(k))
        count += 1


def verify_preservation(phi, descriptor, trials=200, skew=False, tol=DEFAULT_TOL, seed=0):
    """Compare ``sigma_pi`` of products of images with that of the plain products.

    Returns ``(True, None)`` or ``(False, operands)`` for the first violation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    prod = evaluate_skew if skew else evaluate
    for ops in sample_tuples(descriptor.k, phi.n_in, trials, rng):
        lhs = peripheral_spectrum(prod(descriptor, [phi(a) for a in ops]), tol)
        rhs = peripheral_spectrum(prod(descriptor, ops), tol)
        if not spectra_equal(lhs, rhs, tol):
            return False, ops
    return True, None


# --- recovery ----------------------------------------------------------------


@dataclass
class RecoveryReport:
    form: Form
    scalar: complex = None
    transform: np.ndarray = None
    residual: float = float("inf")
    checked_constraints: list = field(default_factory=list)
    candidates: list = field(default_factory=list)

    def to_json(self):
        return {
            "form": self.form.value,
            "scalar": complex_to_json(self.scalar) if self.scalar is not None else None,
            "transform": matrix_to_json(self.transform) if self.transform is not None else None,
            "residual": self.residual if np.isfinite(self.residual) else None,
            "checked_constraints": [
                {"name": name, "passed": ok} for name, ok in self.checked_constraints
            ],
            "candidates": [[form.value, complex_to_json(lam)] for form, lam in self.candidates],
        }


def _normalize_transform(t):
    """Unit Frobenius norm, first clearly nonzero entry (row-major) real positive."""
    t = t / np.linalg.norm(t)
    flat = t.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-6 * np.abs(flat).max()))
    return t * (abs(flat[idx]) / flat[idx])


def _fit(phi, lam, transpose, tol):
    """Solve ``Phi(E) T = lam T E'`` over all units; return ``(T, residual)`` or None."""
    n = phi.n_in
    eye = np.eye(n)
    blocks = []
    for idx, img in enumerate(phi.images):
        e = matrix_unit(n, *divmod(idx, n))
        if transpose:
            e = e.T
        # row-major vec: vec(X Y Z) = (X kron Z^t) vec(Y)
        blocks.append(np.kron(img, eye) - lam * np.kron(eye, e.T))
    system = np.vstack(blocks)
    _, s, vh = np.linalg.svd(system, full_matrices=False)
    null = s <= tol * s[0]
    if not np.any(null):
        return None
    t = vh[-1].conj().reshape(n, n)
    if np.linalg.cond(t) >= 1.0 / tol:
        return None
    t = _normalize_transform(t)
    tinv = np.linalg.inv(t)
    resid = 0.0
    for idx, img in enumerate(phi.images):
        e = matrix_unit(n, *divmod(idx, n))
        pred = lam * t @ (e.T if transpose else e) @ tinv
        resid = max(resid, float(np.linalg.norm(img - pred)))
    return t, resid


def _search(phi, scalars, tol):
    fits = []
    for lam in scalars:
        for transpose in (False, True):
            got = _fit(phi, lam, transpose, tol)
            if got is not None and got[1] <= tol * max(1.0, _table_scale(phi)):
                fits.append((transpose, lam, got[0], got[1]))
    return fits


def _table_scale(phi):
    return max(float(np.linalg.norm(m)) for m in phi.images)


def roots_of_unity(m):
    return [np.exp(2j * np.pi * j / m) if j else 1.0 + 0j for j in range(m)]


def recover_banach_form(phi, m, tol=DEFAULT_TOL):
    """Fit ``Phi(A) = lam T A T^-1`` or ``lam T A^t T^-1`` with ``lam^m = 1``."""
    if m < 1:
        raise ValueError("width m must be positive")
    if phi.n_in != phi.n_out:
        return RecoveryReport(Form.NON_STANDARD, checked_constraints=[("square table", False)])
    fits = _search(phi, roots_of_unity(m), tol)
    if not fits:
        return RecoveryReport(Form.NON_STANDARD, checked_constraints=[("lam^m=1", False)])
    transpose, lam, t, resid = fits[0]
    form = Form.TRANSPOSE_SIMILARITY if transpose else Form.SIMILARITY
    return RecoveryReport(
        form,
        complex(lam),
        t,
        resid,
        [("lam^m=1", bool(abs(lam**m - 1) <= tol))],
        [(Form.TRANSPOSE_SIMILARITY if tr else Form.SIMILARITY, complex(l)) for tr, l, _, _ in fits],
    )


def recover_hilbert_form(phi, m, tol=DEFAULT_TOL):
    """Fit ``Phi(A) = c U A U^*`` or ``c U A^t U^*`` with ``c = +-1``, U unitary;
    ``c = -1`` is rejected for odd ``m``."""
    if m < 1:
        raise ValueError("width m must be positive")
    if phi.n_in != phi.n_out:
        return RecoveryReport(Form.NON_STANDARD, checked_constraints=[("square table", False)])
    fits = _search(phi, [1.0 + 0j, -1.0 + 0j], tol)
    candidates = [
        (Form.UNITARY_TRANSPOSE_SIMILARITY if tr else Form.UNITARY_SIMILARITY, complex(c))
        for tr, c, _, _ in fits
    ]
    for transpose, c, t, resid in fits:
        u = t / np.linalg.norm(t, 2)
        n = u.shape[0]
        unitary_ok = bool(np.linalg.norm(u @ u.conj().T - np.eye(n)) <= max(tol, 1e-12) * 1e3)
        parity_ok = not (m % 2 == 1 and c.real < 0)
        checks = [("c in {-1,1}", True), ("U unitary", unitary_ok), ("c=1 whenever m is odd", parity_ok)]
        if not unitary_ok:
            continue
        if not parity_ok:
            return RecoveryReport(Form.NON_STANDARD, complex(c), u, resid, checks, candidates)
        form = Form.UNITARY_TRANSPOSE_SIMILARITY if transpose else Form.UNITARY_SIMILARITY
        return RecoveryReport(form, complex(c), u, resid, checks, candidates)
    return RecoveryReport(
        Form.NON_STANDARD, checked_constraints=[("unitary fit with c in {-1,1}", False)], candidates=candidates
    )


# --- scalar-operator test ----------------------------------------------------


def scalar_power_test(a, b, n_exp, trials=64, tol=DEFAULT_TOL, seed=0):
    """``<Ax,x> = <Bx,x>^n`` on random unit vectors, cross-checked against the
    closed form ``B = cI, A = c^n I``.

    Raises :class:`InconsistentWithLemma` when the two routes disagree.
    """
    a = as_matrix(a)
    b = as_matrix(b, a.shape[0])
    if n_exp < 2:
        raise ValueError("n_exp must be at least 2")
    if not np.any(a) or not np.any(b):
        raise ZeroOperator("both operators must be nonzero")
    d = a.shape[0]
    rng = np.random.default_rng(seed)
    scale = max(1.0, np.linalg.norm(a, 2), np.linalg.norm(b, 2) ** n_exp)

    sampled = True
    for _ in range(trials):
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        x /= np.linalg.norm(x)
        qa = np.vdot(x, a @ x)
        qb = np.vdot(x, b @ x)
        if abs(qa - qb**n_exp) > tol * scale:
            sampled = False
            break

    c = np.trace(b) / d
    eye = np.eye(d)
    closed = bool(
        np.linalg.norm(b - c * eye) <= tol * max(1.0, np.linalg.norm(b))
        and np.linalg.norm(a - c**n_exp * eye) <= tol * scale
    )
    if sampled != closed:
        raise InconsistentWithLemma(
            f"sampled identity {'holds' if sampled else 'fails'} but scalar form "
            f"{'holds' if closed else 'fails'}"
        )
    return closed


# --- Wigner step ---------------------------------------------------------------


@dataclass(frozen=True)
class WignerResult:
    kind: WignerKind
    unitary: np.ndarray = None
    phases: np.ndarray = None


def _phase_alignment(gx, gy, tol):
    """Phases ``phi`` with ``gy[i,j] = phi_i conj(phi_j) gx[i,j]``, grown along a
    maximum-weight spanning forest of the Gram graph."""
    k = gx.shape[0]
    phases = np.ones(k, dtype=np.complex128)
    done = np.zeros(k, dtype=bool)
    weight = np.abs(gx)
    for root in range(k):
        if done[root]:
            continue
        done[root] = True
        frontier = [root]
        while True:
            best, edge = tol, None
            for i in frontier:
                for j in np.flatnonzero(~done):
                    if weight[i, j] > best:
                        best, edge = weight[i, j], (i, j)
            if edge is None:
                break
            i, j = edge
            # gy[i,j] = phi_i conj(phi_j) gx[i,j]
            phases[j] = np.conj(gy[i, j] / (phases[i] * gx[i, j]))
            phases[j] /= abs(phases[j])
            done[j] = True
            frontier.append(j)
    return phases


def wigner_check(pairs, tol=DEFAULT_TOL):
    """Classify ``x_j -> y_j`` as a unitary or antiunitary map up to phases.

    ``pairs`` holds ``(x_j, y_j)`` with unit vectors ``x_j`` spanning the space.
    """
    xs = np.array([np.asarray(x, dtype=np.complex128) for x, _ in pairs])
    ys = np.array([np.asarray(y, dtype=np.complex128) for _, y in pairs])
    n = xs.shape[1]
    if np.linalg.matrix_rank(xs, tol=max(tol, 1e-12)) < n:
        raise SpanDeficient("input vectors do not span the space")
    gx = xs.conj() @ xs.T  # gx[i,j] = <x_i, x_j>, linear in the first slot
    gx = gx.T
    gy = (ys.conj() @ ys.T).T
    atol = max(tol, 1e-12) * 1e3
    if np.max(np.abs(np.abs(gy) - np.abs(gx))) > atol:
        return WignerResult(WignerKind.NEITHER)
    for kind, src, g in (
        (WignerKind.UNITARY, xs, gx),
        (WignerKind.ANTIUNITARY, xs.conj(), gx.conj()),
    ):
        phases = _phase_alignment(g, gy, atol)
        if np.max(np.abs(gy - np.outer(phases, phases.conj()) * g)) > atol:
            continue
        cols = (src * phases[:, None]).T
        u = ys.T @ np.linalg.pinv(cols)
        if np.linalg.norm(u @ cols - ys.T) > atol * len(pairs):
            continue
        if np.linalg.norm(u.conj().T @ u - np.eye(n)) > atol:
            continue
        return WignerResult(kind, u, phases)
    return WignerResult(WignerKind.NEITHER)
