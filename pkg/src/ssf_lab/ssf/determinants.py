"""Perturbation determinants on the exterior of the disk and on the half-plane."""

from dataclasses import dataclass

import numpy as np

from .. import numkernel as nk
from ..errors import ContourTooTight, SingularToTolerance
from ..operators import check_contraction, check_dissipative
from ..validation import check_same_shape

CONTOUR_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class PerturbationDeterminant:
    """``Delta(z) = det(I + (A1 - A0)(A0 - z)^{-1}) = det(A1 - z) / det(A0 - z)``.

    ``domain`` is ``"disk-exterior"`` for contraction pairs and
    ``"halfplane"`` for m-dissipative pairs.  For the latter the function is
    analytic in the lower half-plane.
    """

    a1: np.ndarray
    a0: np.ndarray
    domain: str
    clearance: float = 1.0

    @property
    def n(self):
        return self.a0.shape[0]

    def _check_points(self, z):
        if self.domain == "disk-exterior":
            if np.any(np.abs(z) < self.clearance):
                raise ContourTooTight(
                    f"|lambda| must be >= {self.clearance:.6g} for this pair")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        self._check_points(z)
        flat = z.reshape(-1)
        eye = np.eye(self.n, dtype=complex)
        shifted = self.a0[None] - flat[:, None, None] * eye
        k = self.a1 - self.a0
        try:
            res = nk.solve(shifted, k)
        except SingularToTolerance:
            raise SingularToTolerance("A0 - z is singular at a requested point") from None
        d = nk.det(eye + res)
        d = np.atleast_1d(d).reshape(z.shape)
        return complex(d) if d.ndim == 0 else d

    def ratio_form(self, z):
        """``det(A1 - z)/det(A0 - z)`` straight from two determinants."""
        z = np.asarray(z, dtype=complex)
        eye = np.eye(self.n, dtype=complex)
        flat = z.reshape(-1)[:, None, None]
        num = nk.det(self.a1[None] - flat * eye)
        den = nk.det(self.a0[None] - flat * eye)
        out = (np.atleast_1d(num) / np.atleast_1d(den)).reshape(z.shape)
        return complex(out) if out.ndim == 0 else out

    def log_derivative(self, z):
        """``Delta'/Delta = -trace((A1 - z)^{-1} - (A0 - z)^{-1})``."""
        return -resolvent_trace_difference(self.a1, self.a0, z)


def resolvent_trace_difference(a1, a0, z):
    """``trace((A1 - z)^{-1} - (A0 - z)^{-1})`` for every ``z`` in an array."""
    z = np.asarray(z, dtype=complex)
    a1 = np.asarray(getattr(a1, "matrix", a1), dtype=complex)
    a0 = np.asarray(getattr(a0, "matrix", a0), dtype=complex)
    eye = np.eye(a0.shape[0], dtype=complex)
    flat = z.reshape(-1)[:, None, None]
    r1 = nk.solve(a1[None] - flat * eye, eye)
    r0 = nk.solve(a0[None] - flat * eye, eye)
    out = np.trace(r1 - r0, axis1=1, axis2=2).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def disk_determinant(t1, t0):
    t1 = check_contraction(t1)
    t0 = check_contraction(t0)
    check_same_shape(t1.matrix, t0.matrix)
    if t1.strict and t0.strict:
        # spectra sit strictly inside the disk: the unit circle itself is admissible
        clearance = max(t1.norm_certificate, t0.norm_certificate) + CONTOUR_MARGIN
    else:
        clearance = 1 + CONTOUR_MARGIN
    return PerturbationDeterminant(t1.matrix, t0.matrix, "disk-exterior", clearance)


def halfplane_determinant(l1, l0):
    l1 = check_dissipative(l1)
    l0 = check_dissipative(l0)
    check_same_shape(l1.matrix, l0.matrix)
    return PerturbationDeterminant(l1.matrix, l0.matrix, "halfplane", 0.0)


def pert_det_disk(t1, t0, lam):
    """``det(I + (T1 - T0)(T0 - lam)^{-1})`` for ``|lam| >= 1 + 1e-6``.

    Strict pairs may also be evaluated anywhere outside their norm ball.
    """
    return disk_determinant(t1, t0)(lam)


def pert_det_halfplane(l1, l0, z):
    """``det(I + (L1 - L0)(L0 - z)^{-1})``; raises if ``L0 - z`` is singular."""
    return halfplane_determinant(l1, l0)(z)


def chain_rule_check(t2, t1, t0, lams):
    """Max relative defect of ``Delta_{2/1} Delta_{1/0} = Delta_{2/0}``."""
    mats = [np.asarray(getattr(t, "matrix", t), dtype=complex) for t in (t2, t1, t0)]
    check_same_shape(*mats)
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    d21 = PerturbationDeterminant(mats[0], mats[1], "disk-exterior", 0.0)(lams)
    d10 = PerturbationDeterminant(mats[1], mats[2], "disk-exterior", 0.0)(lams)
    d20 = PerturbationDeterminant(mats[0], mats[2], "disk-exterior", 0.0)(lams)
    return float(np.max(np.abs(d21 * d10 - d20) / np.abs(d20)))


def ratio_identity_defect(pd, z):
    """Max of ``|Delta(z) det(A0 - z) - det(A1 - z)| / |det(A1 - z)|``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    eye = np.eye(pd.n, dtype=complex)
    num = np.atleast_1d(nk.det(pd.a1[None] - z[:, None, None] * eye))
    den = np.atleast_1d(nk.det(pd.a0[None] - z[:, None, None] * eye))
    d = np.atleast_1d(pd(z))
    return float(np.max(np.abs(d * den - num) / np.abs(num)))
