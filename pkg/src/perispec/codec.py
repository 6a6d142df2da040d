"""JSON codecs for matrices, descriptors and map tables.

Complex numbers are two-element ``[re, im]`` arrays of finite doubles;
matrices are ``{"n": n, "data": [...]}`` with ``n*n`` entries, row-major.
"""
import json
import math

import numpy as np

from .densela import as_matrix
from .errors import InvalidMatrix


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj):
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    ):
        raise InvalidMatrix(f"complex value must be [re, im], got {obj!r}")
    re, im = float(obj[0]), float(obj[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise InvalidMatrix("complex value is not finite")
    return complex(re, im)


def matrix_to_json(a):
    a = np.asarray(a, dtype=np.complex128)
    return {"n": int(a.shape[0]), "data": [complex_to_json(z) for z in a.ravel()]}


def matrix_from_json(obj):
    if not isinstance(obj, dict) or "n" not in obj or "data" not in obj:
        raise InvalidMatrix('matrix JSON must be an object with "n" and "data"')
    n = obj["n"]
    data = obj["data"]
    if not isinstance(n, int) or n < 1:
        raise InvalidMatrix(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(data, list) or len(data) != n * n:
        raise InvalidMatrix(f'"data" must hold n*n = {n * n} entries')
    vals = [complex_from_json(v) for v in data]
    return as_matrix(np.array(vals, dtype=np.complex128).reshape(n, n))


def vector_to_json(v):
    return [complex_to_json(z) for z in np.ravel(v)]


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def load_path(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
