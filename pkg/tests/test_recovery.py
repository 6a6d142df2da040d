import numpy as np
import pytest

from perispec import recovery
from perispec.errors import DimensionMismatch, InconsistentWithLemma, NotLinearConsistent, SpanDeficient, ZeroOperator
from perispec.fuzz import random_invertible, random_unitary
from perispec.recovery import Form, WignerKind
from perispec.seqdesc import validate

from conftest import cgauss


def up_to_scalar(t, want):
    c = np.vdot(want, t) / np.vdot(want, want)
    return np.linalg.norm(t - c * want) / np.linalg.norm(t)


def test_table_matches_callable(rng):
    t = random_invertible(3, rng)
    phi = recovery.standard_map(t, 1j, transpose=True)
    a = cgauss(rng, 3, 3)
    np.testing.assert_allclose(phi(a), 1j * t @ a.T @ np.linalg.inv(t), atol=1e-10)
    again = recovery.LinearMapTable.from_callable(phi, 3)
    np.testing.assert_allclose(again(a), phi(a))


def test_from_callable_rejects_nonlinear():
    with pytest.raises(NotLinearConsistent):
        recovery.LinearMapTable.from_callable(lambda a: a @ a, 2)


def test_table_shape_checks():
    with pytest.raises(DimensionMismatch):
        recovery.LinearMapTable(2, 2, (np.eye(2),) * 3)
    phi = recovery.embedding_fixture()
    with pytest.raises(DimensionMismatch):
        phi(np.eye(3))


def test_json_roundtrip():
    phi = recovery.embedding_fixture()
    back = recovery.LinearMapTable.from_json(phi.to_json())
    assert all(np.array_equal(x, y) for x, y in zip(phi.images, back.images))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("transpose", [False, True])
def test_banach_roundtrip(rng, m, transpose):
    for j in range(m):
        lam = recovery.roots_of_unity(m)[j]
        t = random_invertible(4, rng)
        rep = recovery.recover_banach_form(recovery.standard_map(t, lam, transpose), m)
        assert rep.form == (Form.TRANSPOSE_SIMILARITY if transpose else Form.SIMILARITY)
        assert abs(rep.scalar - lam) < 1e-12
        assert up_to_scalar(rep.transform, t) < 1e-8
        assert rep.residual <= 1e-8


def test_banach_exclusivity(rng):
    # for n >= 2 a map cannot fit both the plain and the transposed form
    for m in (2, 3, 4):
        t = random_invertible(3, rng)
        rep = recovery.recover_banach_form(recovery.standard_map(t, -1.0 if m % 2 == 0 else 1.0), m)
        assert len(rep.candidates) == 1


def test_banach_rejects_wrong_root(rng):
    t = random_invertible(3, rng)
    rep = recovery.recover_banach_form(recovery.standard_map(t, 1j), 3)
    assert rep.form == Form.NON_STANDARD


def test_transform_normalization(rng):
    t = random_invertible(3, rng)
    rep = recovery.recover_banach_form(recovery.standard_map(5 * t), 2)
    assert abs(np.linalg.norm(rep.transform) - 1) < 1e-12
    flat = rep.transform.ravel()
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-6)[0]]
    assert lead.real > 0 and abs(lead.imag) < 1e-12


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_hilbert_roundtrip(rng, m):
    for c in (1.0, -1.0):
        for transpose in (False, True):
            u = random_unitary(3, rng)
            rep = recovery.recover_hilbert_form(recovery.unitary_map(u, c, transpose), m)
            if m % 2 == 1 and c < 0:
                assert rep.form == Form.NON_STANDARD
                assert ("c=1 whenever m is odd", False) in rep.checked_constraints
                continue
            want = Form.UNITARY_TRANSPOSE_SIMILARITY if transpose else Form.UNITARY_SIMILARITY
            assert rep.form == want
            assert rep.scalar == c
            assert np.linalg.norm(rep.transform @ rep.transform.conj().T - np.eye(3)) < 1e-10
            assert up_to_scalar(rep.transform, u) < 1e-8


def test_hilbert_rejects_non_unitary(rng):
    t = np.diag([1.0, 3.0, 0.5]) + 0j
    rep = recovery.recover_hilbert_form(recovery.standard_map(t), 2)
    assert rep.form == Form.NON_STANDARD


def test_embedding_is_nonstandard():
    phi = recovery.embedding_fixture()
    for d in [validate(2, (1, 2)), validate(2, (2, 1, 2)), validate(3, (2, 3, 1, 3, 2))]:
        ok, ops = recovery.verify_preservation(phi, d, trials=60, seed=1)
        assert ok and ops is None
    assert recovery.recover_banach_form(phi, 3).form == Form.NON_STANDARD
    assert recovery.recover_hilbert_form(phi, 3).form == Form.NON_STANDARD


def test_transpose_breaks_non_quasi(rng):
    d = validate(3, (1, 2, 3))
    phi = recovery.standard_map(random_invertible(3, rng), transpose=True)
    ok, ops = recovery.verify_preservation(phi, d, trials=200, seed=0)
    assert not ok and len(ops) == 3


def test_parity_rule(rng):
    u = random_unitary(3, rng)
    phi = recovery.unitary_map(u, -1.0)
    for m, expect in [(2, True), (3, False), (4, True), (5, False)]:
        d = validate(2, (2,) * ((m - 1) // 2) + (1,) + (2,) * (m - 1 - (m - 1) // 2))
        ok, _ = recovery.verify_preservation(phi, d, trials=80, skew=True, seed=m)
        assert ok == expect


def test_scalar_power_test(rng):
    c = np.exp(0.4j) * 1.3
    eye = np.eye(3)
    assert recovery.scalar_power_test(c**3 * eye, c * eye, 3)
    b = cgauss(rng, 3, 3)
    assert not recovery.scalar_power_test(b @ b, b, 2)
    # diagonal with equal modulus but distinct phases still fails the identity
    assert not recovery.scalar_power_test(np.diag([1, -1, 1]) + 0j, np.diag([1, 1j, 1]), 2)
    with pytest.raises(ZeroOperator):
        recovery.scalar_power_test(np.zeros((2, 2)), eye[:2, :2], 2)
    with pytest.raises(ValueError):
        recovery.scalar_power_test(eye, eye, 1)


def test_scalar_power_inconsistency_is_raised():
    # with no samples the sampled route holds vacuously; the closed form does not
    a = np.diag([1.0, 2.0]) + 0j
    b = np.eye(2, dtype=complex)
    with pytest.raises(InconsistentWithLemma):
        recovery.scalar_power_test(a, b, 2, trials=0)


def _pairs(w, n, rng, conj=False):
    xs = cgauss(rng, n + 2, n)
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, len(xs)))
    return [(x, ph * (w @ (x.conj() if conj else x))) for x, ph in zip(xs, phases)]


def test_wigner_unitary_and_antiunitary(rng):
    w = random_unitary(3, rng)
    res = recovery.wigner_check(_pairs(w, 3, rng))
    assert res.kind == WignerKind.UNITARY
    assert up_to_scalar(res.unitary, w) < 1e-8
    res = recovery.wigner_check(_pairs(w, 3, rng, conj=True))
    assert res.kind == WignerKind.ANTIUNITARY
    assert up_to_scalar(res.unitary, w) < 1e-8


def test_wigner_neither(rng):
    pairs = _pairs(random_unitary(3, rng), 3, rng)
    pairs[0] = (pairs[0][0], cgauss(rng, 3) / 3)
    assert recovery.wigner_check(pairs).kind == WignerKind.NEITHER


def test_wigner_span_deficient():
    x = np.array([1.0, 0.0, 0.0])
    with pytest.raises(SpanDeficient):
        recovery.wigner_check([(x, x), (x, -x)])
