"""Divided differences and double operator integrals with divided-difference symbols.

For a polynomial ``f = sum_k a_k z^k`` the divided difference splits as

    (f(z) - f(w)) / (z - w) = sum_{j=0}^{d-1} z^j psi_j(w),
    psi_j(w) = sum_{k>j} a_k w^{k-1-j},

so the double operator integral ``sum_j T1^j K psi_j(T0)`` is a finite sum
and every identity involving it is exact up to round-off.
"""

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import DimensionMismatch, StepTooSmall
from .funcalc import AnalyticFunction, poly_eval_matrix
from .operators import make_rng, random_contraction

DIAGONAL_SEP = 1e-6


def _as_function(f):
    if isinstance(f, AnalyticFunction):
        return f
    return AnalyticFunction.polynomial(f)


@dataclass(frozen=True)
class DividedDifferenceRep:
    """``terms[j] = (phi_j, psi_j)``; rational sources add one term per pole."""

    terms: tuple
    source: AnalyticFunction

    def __len__(self):
        return len(self.terms)

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast_shapes(z.shape, w.shape), dtype=complex)
        for phi, psi in self.terms:
            out = out + phi(z) * psi(w)
        return out


@dataclass(frozen=True)
class MomentMeasure:
    """Moments ``trace(K T^m)``, m = 0..M, of the measure ``trace(K E(.))``."""

    moments: np.ndarray

    @classmethod
    def from_pair(cls, t, k, order):
        t = np.asarray(getattr(t, "matrix", t), dtype=complex)
        k = np.asarray(k, dtype=complex)
        out = np.empty(order + 1, dtype=complex)
        power = np.eye(t.shape[0], dtype=complex)
        for m in range(order + 1):
            out[m] = np.trace(k @ power)
            power = power @ t
        return cls(out)

    def integrate(self, f):
        """``int f dmu`` for a polynomial ``f`` of degree at most M."""
        c = _as_function(f).coeffs
        if c.size > self.moments.size:
            raise ValueError("not enough moments for this polynomial")
        return complex(np.dot(c, self.moments[:c.size]))


def _split_monomials(coeffs, z, w):
    """``sum_k a_k sum_{j+l=k-1} z^j w^l`` evaluated without division."""
    total = 0j
    for k in range(1, len(coeffs)):
        if coeffs[k] == 0:
            continue
        zp = z ** np.arange(k)
        wp = w ** np.arange(k - 1, -1, -1)
        total += coeffs[k] * np.sum(zp * wp)
    return total


def divided_difference_eval(f, zeta, tau):
    """``(f(zeta) - f(tau)) / (zeta - tau)`` with diagonal value ``f'(zeta)``.

    Near the diagonal the quotient is replaced by the exact split sum
    (polynomial part) and ``-r / ((zeta-p)(tau-p))`` for each pole.
    """
    f = _as_function(f)
    zeta = complex(zeta)
    tau = complex(tau)
    if abs(zeta - tau) > DIAGONAL_SEP * (1 + abs(zeta) + abs(tau)):
        return complex((f(zeta) - f(tau)) / (zeta - tau))
    if f.kind == "sampled":
        return complex(f.deriv((zeta + tau) / 2))
    out = _split_monomials(f.coeffs, zeta, tau)
    for p, r in zip(f.poles, f.residues):
        out += -r / ((zeta - p) * (tau - p))
    return complex(out)


def haagerup_rep_poly(f):
    """Finite separated representation of the divided difference of ``f``.

    Polynomial part: ``phi_j = z^j`` and ``psi_j = sum_{k>j} a_k w^{k-1-j}``
    for ``j < deg f``.  Each pole term ``r/(z-p)`` contributes
    ``phi = -r/(z-p)``, ``psi = 1/(w-p)``.
    """
    f = _as_function(f)
    if f.kind == "sampled":
        raise TypeError("only polynomial and rational functions have exact splits")
    a = f.coeffs[:f.degree + 1]
    d = f.degree
    if d < 1 and f.poles.size == 0:
        raise ValueError("degree must be >= 1")
    terms = []
    for j in range(d):
        phi = AnalyticFunction.polynomial(np.eye(1, j + 1, j)[0])
        psi = AnalyticFunction.polynomial(a[j + 1:])
        terms.append((phi, psi))
    for p, r in zip(f.poles, f.residues):
        terms.append((AnalyticFunction.rational([p], [-r]),
                      AnalyticFunction.rational([p], [1.0])))
    return DividedDifferenceRep(tuple(terms), f)


def doi_apply(f, t1, t0, k):
    """``sum_n phi_n(T1) K psi_n(T0)``, summed left to right."""
    if isinstance(f, DividedDifferenceRep):
        rep, src = f, f.source
    else:
        src = _as_function(f)
        rep = None
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    k = np.asarray(k, dtype=complex)
    if not (a1.shape == a0.shape == k.shape) or a1.ndim != 2:
        raise DimensionMismatch(f"shapes {a1.shape}, {a0.shape}, {k.shape} disagree")
    out = np.zeros_like(k)
    if src.kind == "poly" or src.poles.size == 0:
        # psi_j(T0) by a backward Horner sweep: psi_{j} = a_{j+1} I + psi_{j+1} T0
        d = src.degree
        a = src.coeffs
        n = k.shape[0]
        eye = np.eye(n, dtype=complex)
        psis = [None] * d
        acc = np.zeros_like(k)
        for j in range(d - 1, -1, -1):
            acc = a[j + 1] * eye + acc @ a0
            psis[j] = acc
        left = eye
        for j in range(d):
            out = out + left @ k @ psis[j]
            left = left @ a1
        return out
    rep = rep or haagerup_rep_poly(src)
    for phi, psi in rep.terms:
        out = out + phi.apply(a1) @ k @ psi.apply(a0)
    return out


def doi_apply_naive(f, t1, t0, k):
    """Term-by-term evaluation of every ``phi_n(T1) K psi_n(T0)``; test oracle."""
    rep = haagerup_rep_poly(f)
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    out = np.zeros_like(np.asarray(k, dtype=complex))
    for phi, psi in rep.terms:
        out = out + phi.apply(a1) @ k @ psi.apply(a0)
    return out


def verify_increment(f, t1, t0):
    """``||f(T1) - f(T0) - DOI(T1 - T0)||``."""
    f = _as_function(f)
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    diff = f.apply(a1) - f.apply(a0) - doi_apply(f, a1, a0, a1 - a0)
    return nk.operator_norm(diff)


def doi_trace(f, t, k):
    """Both sides of ``trace DOI_T,T(K) = sum_k k a_k trace(K T^{k-1})``."""
    f = _as_function(f)
    a = np.asarray(getattr(t, "matrix", t), dtype=complex)
    k = np.asarray(k, dtype=complex)
    lhs = complex(np.trace(doi_apply(f, a, a, k)))
    c = f.coeffs
    mu = MomentMeasure.from_pair(a, k, max(len(c) - 2, 0))
    rhs = complex(sum(j * c[j] * mu.moments[j - 1] for j in range(1, len(c))))
    return lhs, rhs


@dataclass(frozen=True)
class PathDerivative:
    fd: np.ndarray
    doi: np.ndarray
    residual: float
    residuals: tuple = ()
    order: float = float("nan")


def _central_difference(f, a0, diff, t, h):
    plus = f.apply(a0 + (t + h) * diff)
    minus = f.apply(a0 + (t - h) * diff)
    return (plus - minus) / (2 * h)


def path_derivative(f, t0, t1, t=0.0, h=1e-4, halvings=2, floor=1e-11):
    """Central difference of ``s -> f(T_s)`` against the DOI derivative.

    ``T_s = T0 + s (T1 - T0)``.  The step is halved ``halvings`` times and the
    observed order ``log2(res(h) / res(h/2))`` is averaged over the halvings
    whose residuals stay above the round-off ``floor`` (nan if none do).
    """
    if h < 1e-7:
        raise StepTooSmall(f"step {h} is below 1e-7")
    f = _as_function(f)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    diff = a1 - a0
    at = a0 + t * diff
    exact = doi_apply(f, at, at, diff)
    fd = _central_difference(f, a0, diff, t, h)
    res = [nk.operator_norm(fd - exact)]
    step = h
    for _ in range(halvings):
        step /= 2
        if step < 1e-7:
            break
        res.append(nk.operator_norm(_central_difference(f, a0, diff, t, step) - exact))
    res = np.array(res)
    ok = res[1:] > floor
    order = float(np.mean(np.log2(res[:-1][ok] / res[1:][ok]))) if ok.any() else float("nan")
    return PathDerivative(fd, exact, float(res[0]), tuple(res), order)


def lipschitz_ratio(f, trials=200, seed=0, n=4):
    """Largest observed ``||f(T) - f(R)|| / ||T - R||`` over random contraction
    pairs, together with the bound ``sum_k k |a_k|``."""
    f = _as_function(f)
    c = f.coeffs
    bound = float(np.sum(np.arange(len(c)) * np.abs(c)))
    best = 0.0
    for i in range(trials):
        rng = make_rng(seed, i)
        mode = "boundary-touching" if i % 4 == 3 else "strict"
        a = random_contraction(n, mode, rng, norm=rng.uniform(0.2, 1.0)).matrix
        b = random_contraction(n, mode, rng, norm=rng.uniform(0.2, 1.0)).matrix
        gap = nk.operator_norm(a - b)
        if gap == 0:
            continue
        best = max(best, nk.operator_norm(poly_eval_matrix(c, a) - poly_eval_matrix(c, b)) / gap)
    return best, bound
