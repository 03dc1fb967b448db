"""Scalar determinant identities for additive perturbations of accumulative
and Hermitian matrices.

``outer_rep_check`` certifies the contractive determinant
``w_+(z) = det(I + i V_+ (B - z)^{-1})`` on the upper half-plane together
with the matrix inequalities behind its outer property.
``krein_recovery`` handles a Hermitian pair, where
``Delta(z) = exp(\\int xi(t) (t - z)^{-1} dt)`` with the integer-valued
``xi = N_B - N_{B+V}`` and ``xi(x) = (1/pi) lim Im log Delta(x + iy)``.
"""

import numpy as np

from .. import numkernel as nk
from ..errors import NotHermitian, OrderViolation
from ..funcalc import graded_grid, poisson_halfplane
from ..operators import imaginary_part, real_part
from ..validation import as_square, check_same_shape
from .determinants import PerturbationDeterminant

ORDER_TOL = 1e-9


def _min_eig(h):
    return float(nk.hermitian_eigen((h + h.conj().T) / 2).values[0])


def _w_matrices(b, v_half, z):
    n = b.shape[0]
    eye = np.eye(n, dtype=complex)
    c = b + 1j * v_half @ v_half
    w_plus = eye + 1j * v_half @ nk.solve(b - z * eye, v_half)
    w_minus = eye - 1j * v_half @ nk.solve(c - z * eye, v_half)
    return w_plus, w_minus


def outer_rep_check(b, v_plus, z_samples, t_max=1e3):
    """Checks (a)-(d) for an accumulative ``B`` and ``0 <= V_+ <= -Im B``.

    (a) ``|w_+(z)| <= 1``; (b) ``I - W_+^* W_+ >= 0``; (c) ``Re W_-(z) >= I``,
    where ``W_+ = I + i V^{1/2}(B - z)^{-1} V^{1/2}`` and
    ``W_- = W_+^{-1} = I - i V^{1/2}(B + iV - z)^{-1} V^{1/2}``;
    (d) ``log|w_+(z)|`` equals the Poisson integral of ``log|w_+(t)|``.

    Returns a dict of worst-case margins (negative means violated) and the
    Poisson recovery error.
    """
    b = as_square(b, "B")
    v = as_square(v_plus, "V_+")
    check_same_shape(b, v)
    z = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    if np.any(z.imag <= 0):
        raise ValueError("samples must lie in the upper half-plane")
    try:
        low_v = _min_eig(v)
        gap = _min_eig(-imaginary_part(b) - (v + v.conj().T) / 2)
    except NotHermitian:
        raise OrderViolation("V_+ must be Hermitian") from None
    if low_v < -ORDER_TOL:
        raise OrderViolation(f"V_+ is not PSD (eigenvalue {low_v:.3e})")
    if gap < -ORDER_TOL:
        raise OrderViolation(f"V_+ <= -Im B fails by {-gap:.3e}")
    v_half = nk.psd_sqrt((v + v.conj().T) / 2)
    pd = PerturbationDeterminant(b + 1j * v, b, "halfplane", 0.0)
    w = np.atleast_1d(pd(z))
    report = {"modulus_margin": float(np.min(1 - np.abs(w)))}
    contr, real_w = np.inf, np.inf
    det_gap = 0.0
    for zz, wz in zip(z, w):
        wp, wm = _w_matrices(b, v_half, zz)
        contr = min(contr, _min_eig(np.eye(b.shape[0]) - wp.conj().T @ wp))
        real_w = min(real_w, _min_eig(real_part(wm) - np.eye(b.shape[0])))
        det_gap = max(det_gap, abs(nk.det(wp) - wz))
    report["contraction_margin"] = float(contr)
    report["real_part_margin"] = float(real_w)
    report["det_consistency"] = float(det_gap)
    # boundary log-modulus; zeros of w_+ on R are eigenvalues of Re-part of B + iV
    c = b + 1j * v
    if np.linalg.norm(imaginary_part(c)) <= 1e-12 * max(1.0, np.linalg.norm(c)):
        singular = nk.hermitian_eigen(real_part(c)).values
    else:
        singular = np.zeros(0)
    t = graded_grid(singular, t_max=t_max)
    boundary = np.log(np.abs(pd(t + 0j)))
    worst = 0.0
    for zz, wz in zip(z, w):
        worst = max(worst, abs(poisson_halfplane(t, boundary, zz) - np.log(abs(wz))))
    report["poisson_recovery"] = float(worst)
    report["passed"] = bool(report["modulus_margin"] >= -ORDER_TOL
                            and contr >= -ORDER_TOL and real_w >= -ORDER_TOL
                            and worst <= 2e-4)
    return report


def counting_difference(b, b1, x):
    """``#{eig(B) <= x} - #{eig(B1) <= x}``."""
    e0 = nk.hermitian_eigen(b).values
    e1 = nk.hermitian_eigen(b1).values
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return (np.searchsorted(e0, x, side="right")
            - np.searchsorted(e1, x, side="right")).astype(float)


def _vertical_log(pd, x, y, top=1e4, points=600):
    """``log Delta(x + iy)`` continued down from ``x + i*top`` (where it is ~0)."""
    heights = np.geomspace(top, y, points)
    z = x[:, None] + 1j * heights[None, :]
    d = pd(z)
    if np.any(d == 0):
        raise ArithmeticError("determinant vanishes on the approach path")
    start = np.log(d[:, 0])
    steps = np.angle(d[:, 1:] / d[:, :-1])
    return np.log(np.abs(d[:, -1])) + 1j * (start.imag + steps.sum(axis=1))


def krein_recovery(b, v, x, y_sequence=(1e-3, 5e-4, 2.5e-4)):
    """Boundary recovery ``(1/pi) lim Im log Delta(x + iy)`` for a Hermitian pair.

    The branch of ``log Delta`` is followed along vertical paths from far up
    in the half-plane.  Returns the Richardson estimate, the raw values for
    each height and the exact counting function at ``x``.
    """
    b = as_square(b, "B")
    v = as_square(v, "V")
    for name, m in (("B", b), ("V", v)):
        if np.linalg.norm(m - m.conj().T) > 1e-12 * max(1.0, np.linalg.norm(m)):
            raise NotHermitian(f"{name} must be Hermitian")
    pd = PerturbationDeterminant(b + v, b, "halfplane", 0.0)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    raw = np.array([_vertical_log(pd, x, y).imag / np.pi for y in y_sequence])
    hs = np.asarray(y_sequence, dtype=float)
    weights = np.array([np.prod([-hs[k] / (hs[j] - hs[k]) for k in range(len(hs)) if k != j])
                        for j in range(len(hs))])
    estimate = weights @ raw
    exact = counting_difference(b, b + v, x)
    return {"estimate": estimate, "raw": raw, "exact": exact,
            "max_error": float(np.max(np.abs(estimate - exact)))}


def krein_exp_rep_check(b, v, z_samples):
    """Max of ``|Delta(z) - exp(\\int xi (t - z)^{-1} dt)|`` with the piecewise
    constant counting difference integrated in closed form."""
    b = as_square(b, "B")
    v = as_square(v, "V")
    e0 = nk.hermitian_eigen(b).values
    e1 = nk.hermitian_eigen(b + v).values
    z = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    if np.any(z.imag <= 0):
        raise ValueError("samples must lie in the upper half-plane")
    pd = PerturbationDeterminant(b + v, b, "halfplane", 0.0)
    d = np.atleast_1d(pd(z))
    # xi = sum_j (1[t >= e0_j] - 1[t >= e1_j]); each step contributes a log
    # whose branch is continuous on the upper half-plane
    integral = np.zeros_like(z)
    for a0, a1 in zip(e0, e1):
        integral += np.log(a1 - z) - np.log(a0 - z)
    return float(np.max(np.abs(d - np.exp(integral))))


def random_accumulative(n, rng, margin=0.1):
    """``H - i P`` with ``P >= margin I``."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = (g + g.conj().T) / 2
    p = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = p @ p.conj().T / n + margin * np.eye(n)
    return h - 1j * p
