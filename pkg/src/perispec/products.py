"""Generalized and skew generalized products, and the rank-one sandwich closed form."""
from dataclasses import dataclass

import numpy as np

from .densela import (
    DEFAULT_TOL,
    PeripheralSpectrum,
    as_matrix,
    peripheral_spectrum,
)
from .errors import DimensionMismatch


@dataclass(frozen=True)
class ProductInstance:
    descriptor: object
    operands: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(a) for a in self.operands)
        if len(ops) != self.descriptor.k:
            raise DimensionMismatch(
                f"descriptor has {self.descriptor.k} slots, got {len(ops)} operands"
            )
        dims = {a.shape[0] for a in ops}
        if len(dims) > 1:
            raise DimensionMismatch(f"operand dimensions differ: {sorted(dims)}")
        object.__setattr__(self, "operands", ops)

    @property
    def n(self):
        return self.operands[0].shape[0]


def _chain(descriptor, operands, skew):
    inst = ProductInstance(descriptor, operands)
    ops = inst.operands
    out = np.eye(inst.n, dtype=np.complex128)
    for pos, slot in enumerate(descriptor.seq, start=1):
        factor = ops[slot - 1]
        if skew and pos == descriptor.p:
            factor = factor.conj().T
        out = out @ factor
    return out


def evaluate(descriptor, operands):
    """``T_{i_1} T_{i_2} ... T_{i_m}``, multiplied strictly left to right."""
    return _chain(descriptor, operands, skew=False)


def evaluate_skew(descriptor, operands):
    """As :func:`evaluate` with the factor at the distinguished position replaced
    by its conjugate transpose."""
    return _chain(descriptor, operands, skew=True)


def sandwich_trace(rank_one, a, r, s):
    """``<x,f>^(r+s-1) <Ax,f>``: the only possibly nonzero eigenvalue (and the
    trace) of ``(x (x) f)^r A (x (x) f)^s``."""
    return rank_one.pairing() ** (r + s - 1) * complex(rank_one.f @ (a @ rank_one.x))


def sandwich_peripheral(rank_one, a, r, s, tol=DEFAULT_TOL):
    """Peripheral spectrum of ``(x (x) f)^r A (x (x) f)^s`` without an eigensolve."""
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    a = as_matrix(a)
    if a.shape[0] != rank_one.n:
        raise DimensionMismatch(f"operator is {a.shape[0]}-dim, rank-one is {rank_one.n}-dim")
    tau = sandwich_trace(rank_one, a, r, s)
    scale = 1.0 + np.linalg.norm(a) * np.linalg.norm(rank_one.x) * np.linalg.norm(rank_one.f)
    if abs(tau) <= tol * scale:
        return PeripheralSpectrum((0j,), 0.0, tol)
    return PeripheralSpectrum((tau,), abs(tau), tol)


def sandwich_matrix(b, a, r, s):
    """``B^r A B^s`` by repeated multiplication."""
    b = as_matrix(b)
    a = as_matrix(a, b.shape[0])
    return np.linalg.matrix_power(b, r) @ a @ np.linalg.matrix_power(b, s)


def product_peripheral(descriptor, operands, skew=False, tol=DEFAULT_TOL):
    prod = (evaluate_skew if skew else evaluate)(descriptor, operands)
    return prod, peripheral_spectrum(prod, tol)
