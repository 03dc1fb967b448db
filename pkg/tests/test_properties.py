import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ssf_lab import doi
from ssf_lab import numkernel as nk
from ssf_lab import ssf
from ssf_lab.operators import cayley_L_to_T, cayley_T_to_L, make_rng, random_contraction

seeds = st.integers(min_value=0, max_value=2 ** 31)
dims = st.integers(min_value=1, max_value=6)
coef = st.lists(st.floats(-1, 1, allow_nan=False), min_size=2, max_size=9)


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_det_matches_numpy(seed, n):
    r = np.random.default_rng(seed)
    a = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    want = np.linalg.det(a)
    assert abs(nk.det(a) - want) <= 1e-10 * max(1.0, abs(want)) * n


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_cayley_roundtrip(seed, n):
    t = random_contraction(n, "strict", seed)
    assert np.max(np.abs(cayley_L_to_T(cayley_T_to_L(t)).matrix - t.matrix)) <= 1e-9


@settings(max_examples=30, deadline=None)
@given(seeds, dims, coef)
def test_doi_increment(seed, n, c):
    rng = make_rng(seed)
    a1 = random_contraction(n, "strict", rng).matrix
    a0 = random_contraction(n, "strict", rng).matrix
    assert doi.verify_increment(c, a1, a0) <= 1e-10 * (1 + sum(abs(x) for x in c)) * 10


@settings(max_examples=30, deadline=None)
@given(coef, st.complex_numbers(max_magnitude=1), st.complex_numbers(max_magnitude=1))
def test_divided_difference_symmetric(c, z, w):
    a = doi.divided_difference_eval(c, z, w)
    b = doi.divided_difference_eval(c, w, z)
    assert abs(a - b) <= 1e-12 * (1 + abs(a)) * 10


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=5))
def test_negative_coefficients_match_laurent(seed, n):
    rng = make_rng(seed)
    t1 = random_contraction(n, "strict", rng)
    t0 = random_contraction(n, "strict", rng)
    r = ssf.ssf_canonical(t1, t0, N=256)
    c = ssf.laurent_coefficients(t1, t0, 10)
    got = np.array([r.neg_fourier[-m] for m in range(1, 11)])
    assert np.allclose(got, -c[1:] / (2j * np.pi), atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=12))
def test_rank_one_eta_integral(alphas):
    m = ssf.RankOneModel(alphas)
    assert abs(ssf.eta_integral(m) - np.pi * m.C0) <= 1e-4 * np.pi * m.C0
