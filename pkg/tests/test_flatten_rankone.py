import numpy as np
import pytest
from scipy import integrate

from ssf_lab import ssf
from ssf_lab.errors import EigenvalueAtPlusMinusOne, InsufficientDecay
from ssf_lab.operators import make_rng, random_contraction
from ssf_lab.ssf.rank_one import eta, eta_tilde

THETA = 2 * np.pi * np.arange(512) / 512


def test_flatten_worked_example():
    out = ssf.flatten_real(1j * np.exp(-1j * THETA))
    assert np.max(np.abs(out.values - 2 * np.sin(THETA))) <= 1e-10
    assert out.residuals["imag_part"] <= 1e-12


def test_flatten_real_input_unchanged():
    v = np.cos(THETA) + 0.3 * np.sin(2 * THETA)
    assert np.allclose(ssf.flatten_real(v).values, v)


def test_flatten_preserves_negative_frequencies():
    r = np.random.default_rng(3)
    v = r.normal(size=512) + 1j * r.normal(size=512)
    out = ssf.flatten_real(v)
    assert out.residuals["imag_part"] <= 1e-9
    assert out.residuals["negative_defect"] <= 1e-8


def test_flatten_ssf_result():
    rng = make_rng(1)
    t1 = random_contraction(4, "strict", rng)
    t0 = random_contraction(4, "strict", rng)
    xi = ssf.ssf_canonical(t1, t0, N=512)
    flat = ssf.flatten_real(xi)
    assert flat.representative == "flattened"
    assert np.allclose(flat.neg_fourier.coef[:256], xi.neg_fourier.coef[:256], atol=1e-12)
    # the flattened function is still an SSF
    lams = 1.3 * np.exp(2j * np.pi * np.arange(8) / 8)
    assert ssf.verify_resolvent_trace(t1, t0, flat, lams) <= 1e-7


def test_zygmund_functional(oracles):
    assert abs(ssf.zygmund_functional(1j * np.cos(THETA)) - oracles["zygmund_cos"]) <= 1e-14
    v = 1j * (1 + np.cos(THETA)) + 0.5
    assert abs(ssf.zygmund_functional(v) - oracles["zygmund_one_plus_cos"]) <= 1e-12


def test_rank_one_model_parsing():
    m = ssf.RankOneModel.from_spec("geometric:0.5:4")
    assert np.allclose(m.alphas, [1, 0.5, 0.25, 0.125]) and m.C0 == 1.875
    assert ssf.RankOneModel.from_spec("0.1,0.3").alphas[0] == 0.3
    assert ssf.RankOneModel.from_spec("harmonic-log:5").alphas.size == 5
    with pytest.raises(ValueError):
        ssf.RankOneModel.from_spec("bogus")
    with pytest.raises(ValueError):
        ssf.RankOneModel([1.0, -0.1])


def test_rank_one_determinant_matches_matrices():
    m = ssf.RankOneModel([0.7, 0.2, 0.05])
    l0, l1 = m.matrices()
    z = np.array([1 - 1j, -2 - 0.3j])
    pd = ssf.PerturbationDeterminant(l1, l0, "halfplane", 0.0)
    assert np.allclose(pd(z), m.determinant(z))


def test_eta_closed_forms():
    m = ssf.RankOneModel([1.0])
    assert np.isclose(eta(m, 1.0), 0.5 * np.log(2))
    assert np.isclose(eta_tilde(m, 1.0), np.pi / 4)
    with pytest.raises(ValueError):
        ssf.rank_one_eta(m, [0.0])


def test_eta_integral_scipy_oracle(oracles):
    m = ssf.RankOneModel([0.3])
    assert abs(ssf.eta_integral(m) - oracles["eta_integral_alpha03_scipy"]) <= 1e-4 * 0.3 * np.pi
    # independent quadrature of the same integrand
    val, _ = integrate.quad(lambda t: 0.5 * np.log1p(0.09 / t ** 2), 0, np.inf, limit=200)
    assert abs(2 * val - ssf.eta_integral(m)) <= 1e-6


def test_eta_integral_geometric():
    m = ssf.RankOneModel.geometric(0.5, 20)
    assert abs(ssf.eta_integral(m) - np.pi * m.C0) <= 1e-4 * np.pi * m.C0


def test_criterion_geometric(oracles):
    m = ssf.RankOneModel.geometric(0.5, 20)
    out = ssf.rank_one_criterion(m)
    assert abs(out["criterion_sum"] - oracles["geometric_criterion"]) <= 1e-12
    assert abs(out["criterion_sum"] - oracles["two_log_two"]) <= 1e-4
    assert abs(out["weighted_conjugate_mass"] - oracles["conjugate_mass_geometric"]) <= 1e-6
    assert out["bounds_hold"]


def test_conjugate_mass_single():
    out = ssf.rank_one_criterion(ssf.RankOneModel([1.0]))
    assert abs(out["weighted_conjugate_mass"] - np.pi ** 2 / 4) <= 1e-6


def test_growth_family_criterion_outpaces_C0(oracles):
    prev = None
    for n in (32, 256, 2048):
        m = ssf.RankOneModel(ssf.growth_alphas(n))
        o = oracles["growth"][str(n)]
        assert abs(m.C0 - o["C0"]) <= 1e-10
        crit = ssf.rank_one_criterion(m)["criterion_sum"]
        assert abs(crit - o["criterion"]) <= 1e-10
        if prev:
            assert crit - prev[1] > m.C0 - prev[0]
        prev = (m.C0, crit)


def test_exp_representation():
    m = ssf.RankOneModel.geometric(0.5, 20)
    r = np.random.default_rng(0)
    z = r.uniform(-3, 3, 16) - 1j * r.uniform(0.05, 3, 16)
    assert ssf.rank_one_exp_rep_check(m, z) <= 1e-5
    with pytest.raises(ValueError):
        ssf.rank_one_exp_rep_check(m, [1 - 1e-3j])
    with pytest.raises(InsufficientDecay):
        ssf.rank_one_exp_rep_check(m, [-1j], tail_tol=1e-20)


def test_halfplane_argument():
    m = ssf.RankOneModel.geometric(0.5, 10)
    t = np.r_[-np.geomspace(1e-2, 1e2, 20), np.geomspace(1e-2, 1e2, 20)]
    assert ssf.halfplane_argument_check(m, t) <= 1e-6


def test_cayley_map_from_eigenvalues(oracles):
    lams = 1 - 2.0 ** -np.arange(1, 31)
    m = ssf.cayley_corollary_map(lams)
    assert np.allclose(np.sort(m.alphas), np.sort((1 - lams) / (1 + lams)))
    crit = ssf.rank_one_criterion(m)["criterion_sum"]
    assert abs(crit - oracles["corollary_criterion"]) <= 1e-10
    with pytest.raises(EigenvalueAtPlusMinusOne):
        ssf.cayley_corollary_map([0.5, 1.0])
    with pytest.raises(ValueError):
        ssf.cayley_corollary_map([0.5 + 0.1j])
