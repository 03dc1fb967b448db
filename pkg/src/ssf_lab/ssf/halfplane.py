"""Spectral shift functions for pairs of m-dissipative matrices.

For dissipative ``L0, L1`` the determinant ``Delta_L(z) = det(L1 - z)/det(L0 - z)``
is analytic and zero-free in the lower half-plane and tends to 1 at infinity.
The real line is sampled through ``t = tan(theta/2)``, so the point at
infinity is the grid node ``theta = pi`` where ``log Delta_L = 0`` exactly.

If ``L_j`` is the Cayley transform of ``T_j`` then
``log Delta_L(tau(lam)) = log Delta_T(lam) - log Delta_T(-1)``, so the
half-plane SSF pulled back to the circle differs from the disk SSF by a
constant only.
"""

import numpy as np

from ..errors import WindingNonzero
from ..funcalc import AnalyticFunction, BoundaryGrid
from ..operators import cayley_L_to_T, cayley_T_to_L, check_contraction, check_dissipative
from ..validation import check_grid_size
from .determinants import disk_determinant, halfplane_determinant, resolvent_trace_difference
from .disk import _richardson, _representative_values, ssf_canonical, track_branch
from .result import SSFResult, negative_part

OVERSAMPLE = 4
DEFAULT_HEIGHTS = (0.1, 0.05, 0.025)


def _cayley_abscissae(m):
    theta = 2 * np.pi * np.arange(m) / m
    with np.errstate(over="ignore"):
        t = np.tan(theta / 2)
    t[m // 2] = np.inf
    return theta, t


def logdet_on_line(pd, N, y=0.0, oversample=OVERSAMPLE):
    """``log Delta_L(t - iy)`` at ``t = tan(theta_k/2)``, branch zero at infinity."""
    check_grid_size(N, minimum=16)
    m = oversample * N
    _, t = _cayley_abscissae(m)
    delta = np.ones(m, dtype=complex)
    finite = np.isfinite(t)
    delta[finite] = pd(t[finite] - 1j * y)
    # start tracking at infinity, where Delta = 1 and the branch is 0
    rolled = np.roll(delta, -(m // 2))
    logd = np.roll(track_branch(rolled), m // 2)
    logd[m // 2] = 0.0
    return BoundaryGrid(logd[::oversample])


def ssf_halfplane(l1, l0, N=1024, y_sequence=None, representative="anti-analytic"):
    """SSF representative for a pair of m-dissipative matrices.

    ``anti-analytic``: ``-(2 pi i)^{-1} log Delta_L(t)``; ``real-argument``:
    ``-(1/pi) arg Delta_L(t - i0)``.  Strictly dissipative pairs are sampled
    on the real axis; otherwise at heights ``-y`` for ``y`` in
    ``y_sequence`` with a Richardson boundary estimate in ``meta``.
    """
    l1 = check_dissipative(l1)
    l0 = check_dissipative(l0)
    pd = halfplane_determinant(l1, l0)
    strict = l1.strict and l0.strict
    meta = {"strict": bool(strict)}
    if strict:
        heights = (0.0,)
        grid = logdet_on_line(pd, N)
    else:
        heights = tuple(float(y) for y in (y_sequence or DEFAULT_HEIGHTS))
        if min(heights) <= 0:
            raise ValueError("approach heights must be positive for non-strict pairs")
        grids = [logdet_on_line(pd, N, y) for y in heights]
        grid = grids[-1]
        meta["boundary_estimate"] = _richardson([g.values for g in grids], heights)
        meta["accuracy_downgrade"] = 1e-4
    meta["heights"] = heights
    meta["y"] = heights[-1]
    values = _representative_values(grid.values, representative)
    result = SSFResult(BoundaryGrid(values), representative, negative_part(values),
                       {}, "halfplane", dict(meta, logdet=grid))
    # sign report: the trace formula at tau = -2i for this sign and for the
    # opposite sign (+(1/pi) arg Delta), which is the convention for accumulative pairs
    tau = -2j - 1j * max(heights)
    lhs = resolvent_trace_difference(l1, l0, tau)
    rhs = line_integral(result, lambda t: 1 / (t - tau) ** 2)
    return result.with_residuals(trace_residual=abs(lhs + rhs),
                                 opposite_sign_residual=abs(lhs - rhs))


def line_weights(N):
    """Trapezoid weights of ``dt`` on the ``tan(theta/2)`` grid (zero at infinity)."""
    _, t = _cayley_abscissae(N)
    w = (1 + t ** 2) / 2 * (2 * np.pi / N)
    w[N // 2] = 0.0
    return w


def line_integral(ssf, g):
    """``\\int_R g(t - iy) omega(t) dt`` on the half-plane grid, where ``y``
    is the height the SSF was sampled at (0 for strict pairs)."""
    t = ssf.points.copy()
    finite = np.isfinite(t)
    w = line_weights(ssf.N)
    y = ssf.meta.get("y", 0.0)
    out = np.zeros(ssf.N, dtype=complex)
    out[finite] = g(t[finite] - 1j * y) * ssf.values[finite] * w[finite]
    return complex(out.sum())


def verify_halfplane_trace(l1, l0, ssf, taus):
    """Max of ``|trace((L1 - tau)^{-1} - (L0 - tau)^{-1}) + \\int omega (t - tau)^{-2} dt|``
    over points ``tau`` of the lower half-plane."""
    taus = np.atleast_1d(np.asarray(taus, dtype=complex))
    ymax = max(ssf.meta.get("heights", (0.0,)))
    if np.any(taus.imag >= -ymax):
        raise ValueError("sample points must lie below the sampling line")
    lhs = np.atleast_1d(resolvent_trace_difference(l1, l0, taus))
    rhs = np.array([line_integral(ssf, lambda t, tau=tau: 1 / (t - tau) ** 2) for tau in taus])
    return float(np.max(np.abs(lhs + rhs)))


def verify_halfplane_function_trace(l1, l0, ssf, g):
    """``trace(g(T1) - g(T0))`` with ``T_j`` the Cayley transforms of ``L_j``,
    against ``\\int f'(t) omega(t) dt`` where ``f(t) = g((i - t)/(i + t))``."""
    if not isinstance(g, AnalyticFunction):
        g = AnalyticFunction.polynomial(g)
    t1 = cayley_L_to_T(l1).matrix
    t0 = cayley_L_to_T(l0).matrix
    lhs = complex(np.trace(g.apply(t1) - g.apply(t0)))

    def fprime(t):
        zeta = (1j - t) / (1j + t)
        return g.deriv(zeta) * (-2j) / (1j + t) ** 2

    rhs = line_integral(ssf, fprime)
    return lhs, rhs, float(abs(lhs - rhs))


def cross_domain_check(t1, t0, lams):
    """Resolvent traces of a disk pair and of its Cayley images at matched points.

    ``trace(R^L_1 - R^L_0)(tau) = -(1+lam)^2/(2i) trace(R^T_1 - R^T_0)(lam)``
    with ``tau = i(1-lam)/(1+lam)``; returns the max absolute defect.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    t1 = check_contraction(t1)
    t0 = check_contraction(t0)
    l1 = cayley_T_to_L(t1)
    l0 = cayley_T_to_L(t0)
    taus = 1j * (1 - lams) / (1 + lams)
    lhs = np.atleast_1d(resolvent_trace_difference(l1, l0, taus))
    rhs = -(1 + lams) ** 2 / 2j * np.atleast_1d(resolvent_trace_difference(t1, t0, lams))
    return float(np.max(np.abs(lhs - rhs)))


def cayley_transfer(t1, t0, N=1024, representative="anti-analytic"):
    """Compare the disk SSF of ``{T1, T0}`` with the half-plane SSF of the
    Cayley images read at ``t = tan(theta/2)``.

    Returns a dict with the Fourier spectrum of the discrepancy
    ``omega(tan(theta/2)) - xi(e^{i theta})``, its largest non-constant
    coefficient and the predicted constant ``(2 pi i)^{-1} log Delta_T(-1)``
    (anti-analytic case) or its real-argument analogue.
    """
    t1 = check_contraction(t1)
    t0 = check_contraction(t0)
    if not (t1.strict and t0.strict):
        raise ValueError("the transfer comparison needs a strict pair")
    xi = ssf_canonical(t1, t0, N=N, representative=representative)
    l1 = cayley_T_to_L(t1)
    l0 = cayley_T_to_L(t0)
    omega = ssf_halfplane(l1, l0, N=N, representative=representative)
    diff = omega.values - xi.values
    spectrum = np.fft.fftshift(np.fft.fft(diff)) / N
    zero = N // 2
    nonconst = np.delete(spectrum, zero)
    # log Delta_T(-1) on the branch continued from infinity
    logd = xi.meta["logdet"].values
    at_minus_one = logd[N // 2]
    if representative == "anti-analytic":
        predicted = at_minus_one / (2j * np.pi)
    elif representative == "real-argument":
        predicted = at_minus_one.imag / np.pi
    else:
        predicted = -1j * at_minus_one.real / np.pi
    return {
        "spectrum": spectrum,
        "max_nonconstant": float(np.max(np.abs(nonconst))),
        "constant": complex(spectrum[zero]),
        "predicted_constant": complex(predicted),
        "negative_frequency_defect": float(np.max(np.abs(
            omega.neg_fourier.coef - xi.neg_fourier.coef))),
        "xi": xi,
        "omega": omega,
    }


def disk_logdet_at(t1, t0, lam):
    """Principal ``log Delta_T(lam)``; helper for small diagnostics."""
    return complex(np.log(disk_determinant(t1, t0)(lam)))


__all__ = [
    "logdet_on_line",
    "ssf_halfplane",
    "line_weights",
    "line_integral",
    "verify_halfplane_trace",
    "verify_halfplane_function_trace",
    "cross_domain_check",
    "cayley_transfer",
    "WindingNonzero",
]
