import numpy as np
import pytest

from conftest import cgauss, seeded_matrix
from ssf_lab import numkernel as nk
from ssf_lab.errors import DimensionMismatch, NotHermitian, NotPSD, SingularToTolerance
from ssf_lab.operators import make_rng, random_unitary


def test_lu_identity():
    lu = nk.lu_factor(np.eye(4))
    assert np.allclose(lu.lower, np.eye(4)) and np.allclose(lu.upper, np.eye(4))
    assert lu.sign == 1


def test_lu_permutation_sign():
    lu = nk.lu_factor([[0, 1], [1, 0]])
    assert lu.sign == -1
    assert sorted(lu.pivot) == [0, 1]


def test_lu_reconstruction_random(rng):
    for n in (1, 3, 8, 12):
        a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
        lu = nk.lu_factor(a)
        assert np.max(np.abs(lu.permutation @ a - lu.lower @ lu.upper)) <= 1e-12 * np.abs(a).max()
        assert sorted(lu.pivot) == list(range(n))
        assert lu.sign == round(np.linalg.det(lu.permutation).real)


def test_lu_singular():
    with pytest.raises(SingularToTolerance):
        nk.lu_factor([[1, 2], [2, 4]])


def test_det_trivial():
    assert nk.det(np.diag([2, 3])) == 6
    assert nk.det(np.eye(5)) == 1


def test_det_cofactor_oracle(oracles):
    a = seeded_matrix(oracles["det5"]["seed"], 5)
    want = complex(*oracles["det5"]["value"])
    assert abs(nk.det(a) - want) <= 1e-10 * abs(want)


def test_det_singular_flag():
    d, flag = nk.det([[1, 2], [2, 4]], return_flag=True)
    assert d == 0 and flag


def test_det_batched_matches_loop(rng):
    stack = cgauss(rng, 7, 4, 4)
    got = nk.det(stack)
    want = np.array([np.linalg.det(m) for m in stack])
    assert np.allclose(got, want, rtol=1e-12)


def test_det_multiplicative(rng):
    for _ in range(20):
        a = cgauss(rng, 5, 5) + 3 * np.eye(5)
        b = cgauss(rng, 5, 5) + 3 * np.eye(5)
        assert abs(nk.det(a @ b) - nk.det(a) * nk.det(b)) <= 1e-9 * abs(nk.det(a @ b))


def test_solve_trivial():
    b = np.array([[1, 2j], [3, 4]])
    assert np.allclose(nk.solve(np.eye(2), b), b)
    assert np.allclose(nk.solve([[2]], [[1]]), [[0.5]])


def test_solve_residual(rng):
    a = cgauss(rng, 6, 6)
    b = cgauss(rng, 6, 3)
    x = nk.solve(a, b)
    assert np.linalg.norm(a @ x - b, 2) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(x, 2)
    v = nk.solve(a, b[:, 0])
    assert v.shape == (6,)


def test_solve_singular():
    with pytest.raises(SingularToTolerance):
        nk.solve(np.zeros((3, 3)), np.ones(3))


def test_solve_shape_errors():
    with pytest.raises(DimensionMismatch):
        nk.solve(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        nk.solve(np.eye(2), np.ones(3))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        nk.det([[np.nan]])


def test_hermitian_eigen_trivial():
    e = nk.hermitian_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(e.values, [1, 2, 3])
    e = nk.hermitian_eigen([[0, 1], [1, 0]])
    assert np.allclose(e.values, [-1, 1])
    v = e.vectors[:, 0]
    assert np.isclose(abs(np.vdot(v, [1, -1])) / np.sqrt(2), 1)


def test_hermitian_eigen_random(rng):
    g = cgauss(rng, 8, 8)
    a = g + g.conj().T
    e = nk.hermitian_eigen(a)
    q = e.vectors
    scale = np.linalg.norm(a, 2)
    assert np.linalg.norm(a @ q - q * e.values, 2) <= 1e-10 * scale
    assert np.linalg.norm(q.conj().T @ q - np.eye(8), 2) <= 1e-10
    assert np.all(np.diff(e.values) >= 0)
    assert np.allclose(e.values, np.linalg.eigvalsh(a), atol=1e-10 * scale)


def test_hermitian_eigen_closed_form_roots():
    # characteristic polynomial (x-1)(x-2)(x-4) via a rotated diagonal matrix
    q, _ = np.linalg.qr(np.array([[1.0, 2, 0], [0, 1, 3], [1, 0, 1]]))
    a = q @ np.diag([4.0, 1.0, 2.0]) @ q.T
    assert np.allclose(nk.hermitian_eigen(a).values, [1, 2, 4], atol=1e-10)


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        nk.hermitian_eigen([[0, 1], [0, 0]])


def test_psd_sqrt():
    assert np.allclose(nk.psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(nk.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]))
    with pytest.raises(NotPSD):
        nk.psd_sqrt(np.diag([1.0, -1e-6]))
    # tiny negative eigenvalues clamp
    assert np.allclose(nk.psd_sqrt(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))


def test_psd_sqrt_random_and_unitary_covariance(rng):
    g = cgauss(rng, 6, 6)
    a = g.conj().T @ g
    s = nk.psd_sqrt(a)
    assert np.linalg.norm(s @ s - a, 2) <= 1e-9 * (1 + np.linalg.norm(a, 2))
    assert np.min(np.linalg.eigvalsh(s)) >= -1e-10
    u = random_unitary(6, make_rng(3))
    lhs = nk.psd_sqrt(u.conj().T @ a @ u)
    assert np.linalg.norm(lhs - u.conj().T @ s @ u, 2) <= 1e-9 * np.linalg.norm(s, 2)


def test_operator_norm(oracles):
    u = random_unitary(4, make_rng(1))
    assert abs(nk.operator_norm(u) - 1) <= 1e-10
    assert abs(nk.operator_norm(np.diag([0.3, 0.7])) - 0.7) <= 1e-14
    a = seeded_matrix(oracles["norm6"]["seed"], 6)
    assert abs(nk.operator_norm(a) - oracles["norm6"]["value"]) <= 1e-8


def test_operator_norm_unitary_invariance(rng):
    a = cgauss(rng, 5, 5)
    u = random_unitary(5, make_rng(7))
    v = random_unitary(5, make_rng(8))
    assert abs(nk.operator_norm(u @ a @ v) - nk.operator_norm(a)) <= 1e-9


def test_svd_and_trace_norm(rng):
    a = cgauss(rng, 5, 4)
    s = nk.singular_value_decomposition(a)
    assert np.allclose(s.left * s.values @ s.right.conj().T, a, atol=1e-12)
    assert np.allclose(s.values, np.linalg.svd(a, compute_uv=False), atol=1e-12)
    assert np.isclose(nk.trace_norm(a), np.linalg.svd(a, compute_uv=False).sum())


def test_lu_hundred_seeded():
    for seed in range(100):
        r = np.random.default_rng(seed)
        n = int(r.integers(1, 13))
        a = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
        lu = nk.lu_factor(a)
        assert np.max(np.abs(lu.permutation @ a - lu.lower @ lu.upper)) <= 1e-12 * np.abs(a).max()
