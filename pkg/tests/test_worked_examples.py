"""Small closed-form and oracle-backed examples for each module."""

import numpy as np
import pytest
from scipy import integrate

from ssf_lab import doi, funcalc
from ssf_lab import numkernel as nk
from ssf_lab import operators as op
from ssf_lab import ssf
from ssf_lab.ssf.determinants import disk_determinant, halfplane_determinant, ratio_identity_defect


def _strict(seed, n, count=2):
    rng = op.make_rng(seed)
    return [op.random_contraction(n, "strict", rng) for _ in range(count)]


def test_lu_unit_disk_entries():
    r = np.random.default_rng(0)
    a = r.uniform(0, 1, (8, 8)) * np.exp(2j * np.pi * r.uniform(size=(8, 8)))
    lu = nk.lu_factor(a)
    assert np.max(np.abs(lu.permutation @ a - lu.lower @ lu.upper)) <= 1e-12


def test_operator_norm_power_iteration_oracle():
    r = np.random.default_rng(6)
    a = r.normal(size=(6, 6)) + 1j * r.normal(size=(6, 6))
    v = r.normal(size=6) + 0j
    for _ in range(2000):
        v = a.conj().T @ (a @ v)
        v /= np.linalg.norm(v)
    oracle = np.linalg.norm(a @ v)
    assert abs(nk.operator_norm(a) - oracle) <= 1e-8


def test_boundary_touching_norm_one():
    t = op.random_contraction(4, "boundary-touching", 3)
    assert abs(nk.operator_norm(t.matrix) - 1) <= 1e-9


def test_poly_eval_repeated_multiplication():
    r = np.random.default_rng(1)
    f = r.normal(size=7) + 1j * r.normal(size=7)
    t = r.normal(size=(5, 5)) + 1j * r.normal(size=(5, 5))
    want = sum(c * np.linalg.matrix_power(t, k) for k, c in enumerate(f))
    assert np.max(np.abs(funcalc.poly_eval_matrix(f, t) - want)) <= 1e-10 * np.max(np.abs(want))


def test_cauchy_cube_of_scaled_unitary():
    t = 0.5 * op.random_unitary(4, op.make_rng(2))
    got = funcalc.cauchy_funcalc(lambda z: z ** 3, t, r=1.2, N=256)
    assert np.max(np.abs(got - funcalc.poly_eval_matrix([0, 0, 0, 1], t))) <= 1e-9


def test_cauchy_resolvent():
    (t,) = _strict(3, 4, 1)
    got = funcalc.cauchy_funcalc(lambda z: 1 / (z - 2), t.matrix, r=1.5)
    want = np.linalg.solve(t.matrix - 2 * np.eye(4), np.eye(4))
    assert np.max(np.abs(got - want)) <= 1e-9


def test_fourier_random_roundtrip():
    r = np.random.default_rng(4)
    g = funcalc.BoundaryGrid(r.normal(size=256) + 1j * r.normal(size=256))
    back = funcalc.inverse_fourier_transform(funcalc.fourier_transform_grid(g))
    assert np.max(np.abs(back.values - g.values)) <= 1e-11


def test_poisson_half_at_i():
    t = funcalc.symmetric_log_grid(1e-6, 1e5, 20000)
    assert abs(funcalc.poisson_halfplane(t, 1 / (1 + t ** 2), 1j) - 0.5) <= 1e-6


def test_von_neumann_witness():
    z = np.exp(2j * np.pi * np.arange(4096) / 4096)
    r = np.random.default_rng(9)
    for seed in range(100):
        t = op.random_contraction(1 + seed % 6, "strict", seed).matrix
        f = r.normal(size=int(r.integers(1, 10))) + 1j * r.normal(size=1)
        bound = np.max(np.abs(np.polynomial.polynomial.polyval(z, f)))
        assert nk.operator_norm(funcalc.poly_eval_matrix(f, t)) <= bound + 1e-6


def test_haagerup_pointwise_25_pairs():
    r = np.random.default_rng(10)
    f = r.normal(size=7) + 1j * r.normal(size=7)
    rep = doi.haagerup_rep_poly(f)
    assert len(rep) == 6
    z = np.sqrt(r.uniform(size=25)) * np.exp(2j * np.pi * r.uniform(size=25))
    w = np.sqrt(r.uniform(size=25)) * np.exp(2j * np.pi * r.uniform(size=25))
    want = np.array([doi.divided_difference_eval(f, a, b) for a, b in zip(z, w)])
    assert np.max(np.abs(rep(z, w) - want)) <= 1e-10


def test_doi_degree_eight_six_by_six():
    t1, t0 = _strict(11, 6)
    f = np.random.default_rng(11).normal(size=9)
    assert doi.verify_increment(f, t1, t0) <= 1e-9


def test_path_derivative_square_at_zero():
    t0, t1 = _strict(12, 4)
    res = doi.path_derivative([0, 0, 1], t0, t1, t=0, h=1e-4).residual
    scale = nk.operator_norm(t1.matrix - t0.matrix) ** 2
    assert res <= 1e-7 * scale


def test_lipschitz_commuting_diagonal():
    f = np.array([0, 0, 0, 1.0])
    a, b = np.array([[1.0]]), np.array([[-1.0]])
    ratio = nk.operator_norm(funcalc.poly_eval_matrix(f, a) - funcalc.poly_eval_matrix(f, b)) / 2
    assert ratio == 1 and ratio <= doi.lipschitz_ratio(f, trials=1)[1]


def test_ratio_identity_single_point():
    t1, t0 = _strict(13, 5)
    pd = disk_determinant(t1, t0)
    assert ratio_identity_defect(pd, [1.7 * np.exp(1j * np.pi / 5)]) <= 1e-9


def test_scalar_branch_no_winding():
    pd = disk_determinant(0.5 * np.eye(1), np.zeros((1, 1)))
    g = ssf.logdet_on_circle(pd, 1.2, 256)
    assert np.allclose(g.values, np.log(1 - 0.5 / g.points), atol=1e-14)


def test_closure_defect_random_pair():
    t1, t0 = _strict(14, 4)
    pd = disk_determinant(t1, t0)
    lam = np.exp(2j * np.pi * np.arange(4096) / 4096)
    steps = np.angle(np.roll(pd(lam), -1) / pd(lam))
    assert abs(steps.sum()) <= 1e-8


def test_scalar_fourier_coefficients_and_mass():
    a = 0.5
    r = ssf.ssf_canonical(a * np.eye(1), np.zeros((1, 1)), N=256)
    for m in range(1, 12):
        assert abs(r.neg_fourier[-m] - a ** m / (2j * np.pi * m)) <= 1e-14
    z = r.grid.points
    assert abs(np.sum(r.values * r.grid.line_weights()) - a) <= 1e-14


def test_scalar_resolvent_example():
    r = ssf.ssf_canonical(0.5 * np.eye(1), np.zeros((1, 1)), N=1024)
    lhs = ssf.resolvent_trace_difference(0.5 * np.eye(1), np.zeros((1, 1)), 2.0)
    assert abs(lhs - (-1 / 6)) <= 1e-15
    rhs = np.sum(r.values * r.grid.line_weights() / (r.grid.points - 2) ** 2)
    assert abs(lhs + rhs) <= 1e-9


def test_scalar_cube_trace():
    a = 0.7
    r = ssf.ssf_canonical(a * np.eye(1), np.zeros((1, 1)), N=256)
    lhs, rhs, res = ssf.verify_function_trace(a * np.eye(1), np.zeros((1, 1)), r, [0, 0, 0, 1])
    c = ssf.laurent_coefficients(a * np.eye(1), np.zeros((1, 1)), 3)
    assert np.isclose(lhs, a ** 3) and np.isclose(-3 * c[3], a ** 3)
    assert res <= 1e-12


def test_rational_trace_matches_resolvent_check():
    t1, t0 = _strict(15, 4)
    r = ssf.ssf_canonical(t1, t0, N=1024)
    f = funcalc.AnalyticFunction.rational([2.0], [1.0])
    lhs, rhs, _ = ssf.verify_function_trace(t1, t0, r, f)
    # f(T) = (T - 2)^{-1}, so the trace is the resolvent difference at 2
    assert abs(lhs - ssf.resolvent_trace_difference(t1, t0, 2.0)) <= 1e-12
    assert ssf.verify_resolvent_trace(t1, t0, r, [2.0]) <= 1e-9
    assert abs(lhs - rhs) <= 1e-9


def test_zygmund_cos_quadrature_oracle():
    theta = 2 * np.pi * np.arange(4096) / 4096
    got = ssf.zygmund_functional(1j * np.cos(theta))
    want = integrate.quad(lambda t: np.cos(t) * np.log1p(abs(np.cos(t))), 0, 2 * np.pi,
                          limit=200)[0] / (2 * np.pi)
    assert abs(got - want) <= 1e-6


def test_halfplane_ratio_identity():
    rng = op.make_rng(16)
    l1 = op.random_dissipative(4, rng)
    l0 = op.random_dissipative(4, rng)
    pd = halfplane_determinant(l1, l0)
    assert ratio_identity_defect(pd, [-2j]) <= 1e-9


def test_rank_one_one_by_one_halfplane_ssf():
    # L0 = 0, L1 = i alpha: the real SSF on the line is eta_tilde/pi
    alpha = 0.8
    m = ssf.RankOneModel([alpha])
    l0, l1 = m.matrices()
    r = ssf.ssf_halfplane(l1, l0, N=1024, representative="real-argument")
    t = r.points
    ok = np.isfinite(t) & (np.abs(t) > 1)
    # L0 = 0 is not strict: compare the extrapolated boundary values away from the pole
    boundary = -r.meta["boundary_estimate"].imag / np.pi
    assert np.allclose(boundary[ok], ssf.rank_one_eta(m, t[ok])[1] / np.pi, atol=1e-4)


def test_transported_halfplane_trace():
    t1, t0 = _strict(17, 4)
    l1, l0 = op.cayley_T_to_L(t1), op.cayley_T_to_L(t0)
    r = ssf.ssf_halfplane(l1, l0, N=1024)
    assert ssf.verify_halfplane_trace(l1, l0, r, [-1j, 1 - 0.5j, -2 - 2j]) <= 1e-6


@pytest.mark.parametrize("alphas, z", [([1.0], -2j), ([0.3], 1 - 1j)])
def test_exp_rep_scalar(alphas, z):
    assert ssf.rank_one_exp_rep_check(ssf.RankOneModel(alphas), [z]) <= 1e-5


def test_cayley_map_alpha_asymptotics():
    n = np.arange(1, 31)
    lams = 1 - 2.0 ** -n
    m = ssf.cayley_corollary_map(lams)
    assert np.allclose(m.alphas * 2.0 ** (n + 1), 1, atol=2.0 ** -n.min())
    direct = np.sum(m.alphas * np.abs(np.log(m.alphas)))
    assert abs(ssf.rank_one_criterion(m)["criterion_sum"] - direct) <= 1e-6


def test_outer_scalar_closed_form():
    z = np.array([1j, 2 + 0.5j])
    b = np.array([[-1j]])
    w = ssf.PerturbationDeterminant(b + 1j, b, "halfplane", 0.0)(z)
    assert np.allclose(w, 1 + 1j / (-1j - z))


def test_outer_equality_case():
    rng = op.make_rng(18)
    b = ssf.random_accumulative(4, rng)
    v = -(b - b.conj().T) / 2j
    z = np.array([0.5j, 1 + 1j, -1.5 + 0.3j])
    rep = ssf.outer_rep_check(b, v, z)
    assert rep["passed"], rep


def test_chain_rule_scalars():
    a, b = 0.3, -0.6
    lam = 1.5 + 0.2j
    assert ssf.chain_rule_check(np.array([[b]]), np.array([[a]]), np.zeros((1, 1)), [lam]) <= 1e-12
    assert np.isclose((1 - b / lam), (1 - a / lam) * ((b - lam) / (a - lam)))


def test_chain_rule_random_triple():
    ts = _strict(19, 5, 3)
    assert ssf.chain_rule_check(*ts, 1.3 * np.exp(1j * np.arange(6))) <= 1e-9
