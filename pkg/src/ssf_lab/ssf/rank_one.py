"""Explicit rank-one model: ``L0 = 0``, ``L1 = iV`` with ``V = diag(alpha_n)``.

Then ``Delta(z) = prod(1 - i alpha_n / z)`` and on the real line
``log|Delta(t)| = eta(t) = (1/2) sum log(1 + alpha_n^2 / t^2)`` and
``-arg Delta(t) = eta_tilde(t) = sum arctan(alpha_n / t)``.
Integrals over the line use ``t = e^s`` on the positive half-axis together
with the parity of ``eta`` (even) and ``eta_tilde`` (odd).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import EigenvalueAtPlusMinusOne, InsufficientDecay
from .determinants import PerturbationDeterminant

S_RANGE = (-40.0, 40.0)
S_POINTS = 20001
C0_LOWER = np.pi / 4  # min of arctan(x)/x on [0, 1]


@dataclass(frozen=True)
class RankOneModel:
    alphas: np.ndarray

    def __post_init__(self):
        a = np.sort(np.atleast_1d(np.asarray(self.alphas, dtype=float)))[::-1]
        if a.size == 0 or not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise ValueError("alphas must be finite and positive")
        object.__setattr__(self, "alphas", a)

    @property
    def C0(self):
        return float(np.sum(self.alphas))

    @classmethod
    def geometric(cls, ratio, count):
        return cls(ratio ** np.arange(count, dtype=float))

    @classmethod
    def from_spec(cls, text):
        """Parse ``geometric:q:n``, ``harmonic-log:n`` or a comma list."""
        parts = text.split(":")
        if parts[0] == "geometric" and len(parts) == 3:
            return cls.geometric(float(parts[1]), int(parts[2]))
        if parts[0] == "harmonic-log" and len(parts) == 2:
            return cls(growth_alphas(int(parts[1])))
        try:
            return cls(np.array([float(x) for x in text.split(",")]))
        except ValueError:
            raise ValueError(f"cannot parse alphas {text!r}") from None

    def determinant(self, z):
        z = np.asarray(z, dtype=complex)
        return np.prod(1 - 1j * self.alphas / z[..., None], axis=-1)

    def matrices(self):
        n = self.alphas.size
        return np.zeros((n, n), dtype=complex), 1j * np.diag(self.alphas).astype(complex)


def growth_alphas(count):
    n = np.arange(count, dtype=float)
    return 1 / ((n + 2) * np.log(n + 2) ** 2)


def eta(model, t):
    t = np.asarray(t, dtype=float)
    return 0.5 * np.sum(np.log1p((model.alphas / t[..., None]) ** 2), axis=-1)


def eta_tilde(model, t):
    t = np.asarray(t, dtype=float)
    return np.sum(np.arctan(model.alphas / t[..., None]), axis=-1)


def rank_one_eta(model, t_grid):
    """``(eta, eta_tilde)`` sampled on ``t_grid`` (which must avoid 0)."""
    t = np.asarray(t_grid, dtype=float)
    if np.any(t == 0):
        raise ValueError("t grid must avoid 0")
    return eta(model, t), eta_tilde(model, t)


def _log_axis(points=S_POINTS):
    s = np.linspace(*S_RANGE, points)
    return s, np.exp(s)


def eta_integral(model):
    """``\\int_R eta dt`` (equals ``pi * C0``)."""
    s, t = _log_axis()
    return float(2 * np.trapezoid(eta(model, t) * t, s))


def rank_one_criterion(model):
    """``(sum alpha |log alpha|, \\int |eta_tilde| (1+t^2)^{-1} dt)`` plus the
    two-sided comparison of the second quantity with
    ``S = sum alpha log((1+alpha^2)/alpha^2)``.
    """
    a = model.alphas
    crit = float(np.sum(a * np.abs(np.log(a))))
    s, t = _log_axis()
    mass = float(2 * np.trapezoid(eta_tilde(model, t) / (1 + t ** 2) * t, s))
    ssum = float(np.sum(a * np.log((1 + a ** 2) / a ** 2)))
    lower = C0_LOWER * ssum
    upper = ssum + np.pi * model.C0
    return {
        "criterion_sum": crit,
        "weighted_conjugate_mass": mass,
        "lower_bound": lower,
        "upper_bound": upper,
        "bounds_hold": bool(lower <= mass <= upper),
    }


def rank_one_exp_rep_check(model, z_samples, tail_tol=1e-9):
    """Max of ``|Delta(z) - exp((i/pi) \\int eta(t) (t - z)^{-1} dt)|`` for
    ``z`` in the lower half-plane.

    By parity the integral equals ``\\int_0^inf eta(t) 2z/(t^2 - z^2) dt``.
    Tails beyond ``e^{+-40}`` are bounded explicitly and must stay below
    ``tail_tol``.
    """
    z = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    if np.any(z.imag > -1e-2):
        raise ValueError("samples must satisfy Im z <= -1e-2")
    s, t = _log_axis()
    e = eta(model, t)
    big = t[-1]
    small = t[0]
    # eta <= C0^2/(2 t^2) beyond big and eta <= sum log(1 + alpha/t) below small
    tail_hi = np.max(model.C0 ** 2 / (2 * big) * 2 * np.abs(z) / (big ** 2 - np.abs(z) ** 2))
    tail_lo = np.max(small * (np.sum(np.log1p(model.alphas / small)) + model.alphas.size)
                     * 2 / np.abs(z))
    if max(tail_hi, tail_lo) > tail_tol:
        raise InsufficientDecay(f"tail bound {max(tail_hi, tail_lo):.2e} exceeds {tail_tol:.1e}")
    worst = 0.0
    for zz in z:
        integral = np.trapezoid(e * 2 * zz / (t ** 2 - zz ** 2) * t, s)
        worst = max(worst, abs(model.determinant(zz) - np.exp(1j / np.pi * integral)))
    return float(worst)


def halfplane_argument_check(model, t_samples, y=1e-9):
    """Max of ``|-(1/pi) arg Delta(t - iy) - eta_tilde(t)/pi|`` using the
    determinant of the matrix pair (not the product formula).

    The principal argument is compared modulo ``2 pi``, since ``eta_tilde``
    itself can exceed ``pi`` in size.
    """
    l0, l1 = model.matrices()
    pd = PerturbationDeterminant(l1, l0, "halfplane", 0.0)
    t = np.atleast_1d(np.asarray(t_samples, dtype=float))
    d = pd(t - 1j * y)
    gap = np.angle(np.exp(-1j * (np.angle(d) + eta_tilde(model, t))))
    return float(np.max(np.abs(gap)) / np.pi)


def cayley_corollary_map(lams, tol=1e-12):
    """``alpha_n = (1 - lam_n)/(1 + lam_n)`` for eigenvalues in ``(-1, 1)``."""
    lams = np.atleast_1d(np.asarray(lams))
    if np.iscomplexobj(lams):
        if np.any(np.abs(lams.imag) > tol):
            raise ValueError("eigenvalues of a self-adjoint contraction are real")
        lams = lams.real
    lams = lams.astype(float)
    if np.any(np.abs(lams) >= 1 - tol):
        raise EigenvalueAtPlusMinusOne("eigenvalues must lie strictly inside (-1, 1)")
    return RankOneModel((1 - lams) / (1 + lams))
