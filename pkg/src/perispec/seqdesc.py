"""Generalized-product descriptors: validation and Jordan-type classification."""
from collections import Counter
from dataclasses import dataclass

from .errors import MissingIndex, NoUniqueOccurrence, OutOfRange


@dataclass(frozen=True)
class ProductDescriptor:
    """Index sequence over ``k`` slots; ``p`` (1-based) marks the occurrence
    of a slot that appears exactly once."""

    k: int
    seq: tuple
    p: int

    @property
    def width(self):
        return len(self.seq)

    @property
    def distinguished(self):
        """Slot index at position ``p``."""
        return self.seq[self.p - 1]

    def to_json(self):
        return {"k": self.k, "seq": list(self.seq)}


@dataclass(frozen=True)
class SeqClass:
    is_semi_jordan: bool
    is_quasi_semi_jordan: bool
    width: int


def validate(k, seq):
    """Check ``seq`` against ``k`` slots and pick the distinguished position.

    When several slots occur exactly once, the smallest such slot wins.
    """
    seq = tuple(int(i) for i in seq)
    if k < 1:
        raise OutOfRange(f"k must be positive, got {k}")
    if not seq:
        raise OutOfRange("sequence is empty")
    bad = [i for i in seq if not 1 <= i <= k]
    if bad:
        raise OutOfRange(f"entries {bad} outside 1..{k}")
    counts = Counter(seq)
    missing = [i for i in range(1, k + 1) if i not in counts]
    if missing:
        raise MissingIndex(f"slots {missing} never appear")
    singles = [i for i in range(1, k + 1) if counts[i] == 1]
    if not singles:
        raise NoUniqueOccurrence("every slot occurs at least twice")
    return ProductDescriptor(k, seq, seq.index(singles[0]) + 1)


def rotated_tail(d):
    """``(i_{p+1}, ..., i_m, i_1, ..., i_{p-1})``."""
    return d.seq[d.p:] + d.seq[: d.p - 1]


def classify(d):
    seq, m = d.seq, d.width
    semi = seq == seq[::-1] and 2 * d.p == m + 1
    tail = rotated_tail(d)
    return SeqClass(semi, tail == tail[::-1], m)


def classification_json(d):
    c = classify(d)
    return {
        "width": c.width,
        "p": d.p,
        "semi_jordan": c.is_semi_jordan,
        "quasi_semi_jordan": c.is_quasi_semi_jordan,
    }


def from_json(obj):
    if not isinstance(obj, dict) or "k" not in obj or "seq" not in obj:
        raise ValueError('descriptor JSON must be an object with "k" and "seq"')
    if not isinstance(obj["seq"], list) or not all(isinstance(i, int) for i in obj["seq"]):
        raise ValueError('"seq" must be a list of integers')
    if not isinstance(obj["k"], int):
        raise ValueError('"k" must be an integer')
    return validate(obj["k"], obj["seq"])


def enumerate_descriptors(max_width, max_k):
    """Every valid descriptor with width <= max_width and k <= max_k."""
    from itertools import product

    for k in range(1, max_k + 1):
        for m in range(1, max_width + 1):
            for seq in product(range(1, k + 1), repeat=m):
                try:
                    yield validate(k, seq)
                except (MissingIndex, NoUniqueOccurrence):
                    continue
