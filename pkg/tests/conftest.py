import numpy as np
import pytest

from perispec import _backend


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture(params=_backend.available())
def backend(request):
    return request.param
