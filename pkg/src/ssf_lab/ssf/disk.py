"""Spectral shift functions for pairs of contractions.

With ``Delta(lam) = det(T1 - lam)/det(T0 - lam)`` analytic and zero-free for
``|lam| > 1`` and ``log Delta(lam) = sum_{m>=1} c_m lam^{-m}``,
``c_m = -(tr T1^m - tr T0^m)/m``, the function ``-(2 pi i)^{-1} log Delta``
on the circle is an SSF: its negative Fourier coefficients are
``-c_m/(2 pi i)``, which is all the trace formula sees.
"""

import logging

import numpy as np

from .. import numkernel as nk
from ..errors import WindingNonzero
from ..funcalc import AnalyticFunction, BoundaryGrid
from ..operators import check_contraction
from ..validation import check_grid_size
from .determinants import disk_determinant, resolvent_trace_difference
from .result import SSFResult, negative_part

log = logging.getLogger(__name__)

OVERSAMPLE = 4
MAX_STEP = np.pi / 2
DEFAULT_RADII = (1.1, 1.05, 1.025)


def track_branch(delta, max_step=MAX_STEP, closure_tol=1e-6):
    """Continuous logarithm of samples of a zero-free function on a closed loop.

    Consecutive samples may differ in argument by at most ``max_step``; the
    total change of argument around the loop (the winding number times 2 pi)
    must vanish.  The branch starts at the principal value of ``delta[0]``.
    """
    delta = np.asarray(delta, dtype=complex)
    if np.any(delta == 0):
        raise WindingNonzero("determinant vanishes on the contour")
    steps = np.angle(np.roll(delta, -1) / delta)
    worst = np.max(np.abs(steps))
    if worst > max_step:
        raise WindingNonzero(
            f"argument jumps by {worst:.3f} rad between samples; refine the grid")
    total = steps.sum()
    if abs(total) > closure_tol:
        raise WindingNonzero(f"winding number {total / (2 * np.pi):.3f} around the contour")
    arg = np.angle(delta[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return np.log(np.abs(delta)) + 1j * arg


def logdet_on_circle(pd, r, N, oversample=OVERSAMPLE):
    """``log Delta`` on ``|lam| = r`` with the branch that vanishes at infinity.

    Evaluated on ``oversample * N`` points for tracking, then decimated.  The
    branch is fixed by requiring the grid mean (the constant Laurent term)
    to vanish, up to an integer multiple of ``2 pi i``.
    """
    check_grid_size(N, minimum=16)
    m = oversample * N
    lam = r * np.exp(2j * np.pi * np.arange(m) / m)
    logd = track_branch(pd(lam))[::oversample]
    shift = np.round(logd.imag.mean() / (2 * np.pi))
    logd = logd - 2j * np.pi * shift
    return BoundaryGrid(logd, r)


def _richardson(values, hs):
    """Polynomial extrapolation of ``values[j]`` (taken at ``hs[j]``) to ``h = 0``."""
    hs = np.asarray(hs, dtype=float)
    weights = np.array([np.prod([-hs[k] / (hs[j] - hs[k]) for k in range(len(hs)) if k != j])
                        for j in range(len(hs))])
    return np.tensordot(weights, np.asarray(values), axes=1)


def _representative_values(logd, representative):
    if representative == "anti-analytic":
        return -logd / (2j * np.pi)
    if representative == "real-argument":
        return -logd.imag / np.pi + 0j
    if representative == "imaginary-modulus":
        return 1j * logd.real / np.pi
    raise ValueError(f"representative {representative!r} is not produced from log Delta")


def ssf_representatives(t1, t0, r_sequence=None, N=1024):
    """All determinant-based representatives of the SSF of ``{T1, T0}``.

    Strict pairs are sampled on the unit circle itself.  Otherwise ``log
    Delta`` is sampled on each radius of ``r_sequence``; the representatives
    live on the last (smallest) radius and a Richardson estimate of the
    boundary values is kept in ``meta["boundary_estimate"]``.
    """
    t1 = check_contraction(t1)
    t0 = check_contraction(t0)
    pd = disk_determinant(t1, t0)
    check_grid_size(N, minimum=16)
    strict = t1.strict and t0.strict
    meta = {"strict": bool(strict)}
    if strict:
        radii = (1.0,)
        grid = logdet_on_circle(pd, 1.0, N)
    else:
        radii = tuple(float(r) for r in (r_sequence or DEFAULT_RADII))
        if min(radii) < 1 + 1e-6:
            raise ValueError("radii must exceed 1 for pairs that are not strict")
        grids = [logdet_on_circle(pd, r, N) for r in radii]
        grid = grids[-1]
        meta["boundary_estimate"] = _richardson([g.values for g in grids],
                                                [r - 1 for r in radii])
        meta["accuracy_downgrade"] = 1e-4
    meta["radii"] = radii
    trace_diff = complex(np.trace(t1.matrix - t0.matrix))
    out = {}
    for rep in ("anti-analytic", "real-argument", "imaginary-modulus"):
        values = _representative_values(grid.values, rep)
        g = BoundaryGrid(values, grid.radius)
        neg = negative_part(values, grid.radius)
        mass = np.sum(values * g.line_weights())
        result = SSFResult(g, rep, neg, {}, "disk", dict(meta, logdet=grid))
        out[rep] = result.with_residuals(
            mass=abs(mass - trace_diff),
            mass_fourier=abs(2j * np.pi * neg[-1] - trace_diff),
            branch_mean=abs(grid.values.mean()))
    return out


def ssf_canonical(t1, t0, r_sequence=None, N=1024, representative="anti-analytic"):
    """SSF representative of ``{T1, T0}`` on the circle.

    ``anti-analytic``: ``-(2 pi i)^{-1} log Delta``; ``real-argument``:
    ``-(1/pi) arg Delta``.  Both satisfy ``\\oint xi dzeta = trace(T1 - T0)``
    (recorded in ``residuals["mass"]``) and share the coefficients
    ``xi_hat(-m) = -c_m/(2 pi i)``.
    """
    return ssf_representatives(t1, t0, r_sequence, N)[representative]


def laurent_coefficients(t1, t0, m_max):
    """Exact ``c_m = -(tr T1^m - tr T0^m)/m`` from matrix powers (oracle)."""
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    out = np.zeros(m_max + 1, dtype=complex)
    p1 = np.eye(a1.shape[0], dtype=complex)
    p0 = p1.copy()
    for m in range(1, m_max + 1):
        p1 = p1 @ a1
        p0 = p0 @ a0
        out[m] = -(np.trace(p1) - np.trace(p0)) / m
    return out


def contour_integral(ssf, g):
    """``\\oint g(zeta) xi(zeta) d zeta`` on the SSF grid (trapezoid rule)."""
    z = ssf.grid.points
    return complex(np.sum(g(z) * ssf.values * ssf.grid.line_weights()))


def verify_resolvent_trace(t1, t0, ssf, lams):
    """Max of ``|trace(R1 - R0)(lam) + \\oint xi (zeta - lam)^{-2} d zeta|``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    r = ssf.grid.radius
    if np.any(np.abs(lams) < r + 0.05 - 1e-12):
        raise ValueError(f"sample points must satisfy |lam| >= {r + 0.05:.4g}")
    lhs = np.atleast_1d(resolvent_trace_difference(t1, t0, lams))
    z = ssf.grid.points
    w = ssf.values * ssf.grid.line_weights()
    rhs = np.array([np.sum(w / (z - lam) ** 2) for lam in lams])
    return float(np.max(np.abs(lhs + rhs)))


def verify_function_trace(t1, t0, ssf, f):
    """``trace(f(T1) - f(T0))`` against ``\\oint f' xi d zeta``.

    Returns ``(lhs, rhs, residual)``.  For polynomials the Fourier form
    ``2 pi i sum_m m a_m xi_hat(-m)`` is computed as well and the larger of
    the two discrepancies is reported.
    """
    if not isinstance(f, AnalyticFunction):
        f = AnalyticFunction.polynomial(f)
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    r = ssf.grid.radius
    if f.poles.size and np.any(np.abs(f.poles) < r + 0.05):
        raise ValueError("poles of f must lie at distance >= 0.05 outside the contour")
    lhs = complex(np.trace(f.apply(a1) - f.apply(a0)))
    rhs = contour_integral(ssf, f.deriv)
    residual = abs(lhs - rhs)
    if f.kind == "poly" and f.degree <= ssf.N // 2:
        c = f.coeffs
        fourier = 2j * np.pi * sum(m * c[m] * ssf.neg_fourier[-m] for m in range(1, len(c)))
        residual = max(residual, abs(lhs - fourier))
    return lhs, rhs, float(residual)


def mass_identity(t1, t0, ssf):
    """``|\\oint xi d zeta - trace(T1 - T0)|``."""
    a1 = np.asarray(getattr(t1, "matrix", t1), dtype=complex)
    a0 = np.asarray(getattr(t0, "matrix", t0), dtype=complex)
    return abs(contour_integral(ssf, np.ones_like) - np.trace(a1 - a0))


def spectral_radius_bound(t):
    return nk.operator_norm(np.asarray(getattr(t, "matrix", t), dtype=complex))
