"""Dense complex linear algebra: LU, determinants, solves, Jacobi eigensolvers.

Everything operates on ``complex128`` numpy arrays.  The LU routines accept a
single matrix or a stack ``(..., n, n)`` so that determinant and resolvent
evaluations over a whole contour run as one vectorised elimination.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotPSD, SingularToTolerance
from .validation import as_matrix, as_square, as_stack

#: pivots below this fraction of the largest row scale count as zero
PIVOT_TOL = 1e-14


@dataclass(frozen=True)
class LUFactorization:
    """``P @ A = lower @ upper`` where ``P = I[pivot]``."""

    lower: np.ndarray
    upper: np.ndarray
    pivot: np.ndarray
    sign: int

    @property
    def permutation(self):
        return np.eye(len(self.pivot))[self.pivot]


@dataclass(frozen=True)
class HermitianEigen:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True)
class SingularValueDecomposition:
    """``A = left @ diag(values) @ right^H``; ``values`` descending."""

    left: np.ndarray
    values: np.ndarray
    right: np.ndarray


def _lu_inplace(a):
    """Scaled partial pivoting on a stack of shape (B, n, n), in place.

    Returns (pivot, sign, singular) with one entry per batch element.
    Multipliers below a zero pivot are set to 0 so the sweep never divides
    by a vanishing number; the ``singular`` mask records where that happened.
    """
    nb, n, _ = a.shape
    rows = np.arange(nb)
    scale = np.abs(a).max(axis=2)
    tol = PIVOT_TOL * scale.max(axis=1)
    scale = np.where(scale > 0, scale, 1.0)
    pivot = np.tile(np.arange(n), (nb, 1))
    sign = np.ones(nb)
    singular = np.zeros(nb, dtype=bool)
    for k in range(n):
        ratio = np.abs(a[:, k:, k]) / scale[:, k:]
        p = np.argmax(ratio, axis=1) + k
        swap = p != k
        if swap.any():
            idx = rows[swap]
            pk = p[swap]
            a[idx, k], a[idx, pk] = a[idx, pk].copy(), a[idx, k].copy()
            scale[idx, k], scale[idx, pk] = scale[idx, pk], scale[idx, k].copy()
            pivot[idx, k], pivot[idx, pk] = pivot[idx, pk], pivot[idx, k].copy()
            sign[swap] = -sign[swap]
        piv = a[:, k, k]
        small = ~(np.abs(piv) > tol)
        singular |= small
        if k + 1 < n:
            mult = a[:, k + 1:, k] / np.where(small, 1.0, piv)[:, None]
            mult[small] = 0.0
            a[:, k + 1:, k] = mult
            a[:, k + 1:, k + 1:] -= mult[:, :, None] * a[:, k, None, k + 1:]
    return pivot, sign, singular


def lu_factor(a):
    """LU factorisation with row-scale equilibrated partial pivoting.

    Raises :class:`SingularToTolerance` when a pivot falls below
    ``1e-14 * max row scale``.
    """
    a = as_square(a)
    n = a.shape[0]
    work = a.copy()[None]
    pivot, sign, singular = _lu_inplace(work)
    if singular[0]:
        raise SingularToTolerance("matrix is singular to working tolerance")
    lu = work[0]
    lower = np.tril(lu, -1) + np.eye(n)
    upper = np.triu(lu)
    return LUFactorization(lower, upper, pivot[0], int(sign[0]))


def det(a, return_flag=False):
    """Determinant of a matrix or of every matrix in a stack.

    Singular-to-tolerance inputs map to an exact 0; pass ``return_flag=True``
    to also receive the boolean singularity mask.
    """
    a = as_stack(a)
    shape = a.shape[:-2]
    n = a.shape[-1]
    work = a.reshape(-1, n, n).copy()
    if n == 0:
        d = np.ones(work.shape[0], dtype=complex)
        singular = np.zeros(work.shape[0], dtype=bool)
    else:
        _, sign, singular = _lu_inplace(work)
        d = sign * np.prod(np.diagonal(work, axis1=1, axis2=2), axis=1)
        d = np.where(singular, 0.0, d)
    d = d.reshape(shape)
    singular = singular.reshape(shape)
    if d.ndim == 0:
        d, singular = complex(d), bool(singular)
    return (d, singular) if return_flag else d


def solve(a, b):
    """Solve ``a @ x = b``; ``a`` may be a stack, ``b`` broadcasts against it.

    ``b`` may be a vector (n,), a matrix (n, k) or a stack (..., n, k).
    """
    a = as_stack(a)
    b = np.asarray(b, dtype=complex)
    n = a.shape[-1]
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    batch_shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    k = b.shape[-1]
    if b.shape[-2] != n:
        raise ValueError(f"right-hand side has {b.shape[-2]} rows, expected {n}")
    lu = np.broadcast_to(a, batch_shape + (n, n)).reshape(-1, n, n).copy()
    rhs = np.broadcast_to(b, batch_shape + (n, k)).reshape(-1, n, k)
    pivot, _, singular = _lu_inplace(lu)
    if singular.any():
        raise SingularToTolerance(
            f"{int(singular.sum())} of {len(singular)} systems singular to tolerance")
    x = np.take_along_axis(rhs, pivot[:, :, None], axis=1).copy()
    for i in range(1, n):
        x[:, i] -= np.einsum("bj,bjk->bk", lu[:, i, :i], x[:, :i])
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[:, i] -= np.einsum("bj,bjk->bk", lu[:, i, i + 1:], x[:, i + 1:])
        x[:, i] /= lu[:, i, i, None]
    x = x.reshape(batch_shape + (n, k))
    return x[..., 0] if vector else x


def inv(a):
    a = as_stack(a)
    return solve(a, np.eye(a.shape[-1], dtype=complex))


def _rotation_2x2(app, aqq, apq):
    """Unitary Q with Q^H [[app, apq], [conj(apq), aqq]] Q diagonal.

    The smaller of the two Jacobi angles is chosen, which keeps cyclic
    sweeps convergent.
    """
    mag = abs(apq)
    phase = apq / mag
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def hermitian_eigen(a, tol=1e-13, max_sweeps=60):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Sweeps continue until the off-diagonal Frobenius norm is at most
    ``tol * ||A||_F``.  Eigenvalues are returned in ascending order.
    """
    a = as_square(a)
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.conj().T) > 1e-12 * max(scale, 1e-300):
        raise NotHermitian("matrix is not Hermitian to 1e-12 relative")
    n = a.shape[0]
    work = (a + a.conj().T) / 2
    vecs = np.eye(n, dtype=complex)
    sweeps = 0
    off_mask = ~np.eye(n, dtype=bool)
    while sweeps < max_sweeps:
        off = np.sqrt(np.sum(np.abs(work[off_mask]) ** 2))
        if off <= tol * scale:
            break
        sweeps += 1
        floor = 1e-17 * scale
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if abs(apq) <= floor:
                    continue
                g = _rotation_2x2(work[p, p].real, work[q, q].real, apq)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                work[idx, :] = g.conj().T @ work[idx, :]
                work[p, q] = work[q, p] = 0.0
                vecs[:, idx] = vecs[:, idx] @ g
    values = np.real(np.diagonal(work)).copy()
    order = np.argsort(values, kind="stable")
    return HermitianEigen(values[order], vecs[:, order], sweeps)


def singular_value_decomposition(a, tol=1e-15, max_sweeps=60):
    """One-sided (Hestenes) Jacobi SVD.

    Works on columns directly, so small singular values keep high absolute
    accuracy; this is what kernel detection relies on.
    """
    a = as_matrix(a)
    m, n = a.shape
    work = a.copy()
    right = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = np.vdot(work[:, p], work[:, p]).real
                beta = np.vdot(work[:, q], work[:, q]).real
                gamma = np.vdot(work[:, p], work[:, q])
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0:
                    continue
                rotated = True
                g = _rotation_2x2(alpha, beta, gamma)
                idx = [p, q]
                work[:, idx] = work[:, idx] @ g
                right[:, idx] = right[:, idx] @ g
        if not rotated:
            break
    values = np.linalg.norm(work, axis=0)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    work = work[:, order]
    right = right[:, order]
    left = np.zeros_like(work)
    nz = values > 0
    left[:, nz] = work[:, nz] / values[nz]
    return SingularValueDecomposition(left, values, right)


def psd_sqrt(a):
    """Hermitian positive square root; eigenvalues in [-1e-8, 0) clamp to 0.

    Eigenvalues within round-off of zero (``64 eps ||A||``) are also set to
    zero: their square roots would otherwise inject ``O(sqrt(eps))`` noise.
    """
    eig = hermitian_eigen(a)
    if eig.values.size and eig.values[0] < -1e-8:
        raise NotPSD(f"smallest eigenvalue {eig.values[0]:.3e} < -1e-8")
    floor = 64 * np.finfo(float).eps * max(np.abs(eig.values).max(initial=0.0), 1e-300)
    root = np.sqrt(np.where(eig.values > floor, eig.values, 0.0))
    q = eig.vectors
    s = (q * root) @ q.conj().T
    return (s + s.conj().T) / 2


def operator_norm(a):
    """Largest singular value, from the Jacobi spectrum of ``A^H A``."""
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    gram = a.conj().T @ a
    top = hermitian_eigen((gram + gram.conj().T) / 2).values[-1]
    return float(np.sqrt(max(top, 0.0)))


def trace_norm(a):
    return float(np.sum(singular_value_decomposition(a).values))
