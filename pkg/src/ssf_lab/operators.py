"""Contractions, m-dissipative matrices and the maps between them.

Covers the Cayley transform T <-> L = -iI + 2i(I+T)^{-1}, the Moebius map of
points, a finite Egervary power dilation, and the two pair preprocessing
steps (rotation by a unimodular constant, kernel regularisation) used to
bring an arbitrary pair of contractions into a form where the Cayley
transform applies.
"""

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import (
    ExhaustedAttempts,
    KernelAtMinusOne,
    KernelNotPresent,
    NotContraction,
    NotDissipative,
    NotUnitary,
    PoleAtInput,
    SingularToTolerance,
)
from .validation import as_complex_scalar, as_square, check_same_shape

CONTRACTION_TOL = 1e-10
STRICT_MARGIN = 1e-8
N_ROOTS = 64


@dataclass(frozen=True)
class Contraction:
    matrix: np.ndarray
    norm_certificate: float
    strict: bool

    @property
    def n(self):
        return self.matrix.shape[0]

    def to_dict(self):
        from .io import matrix_to_dict

        d = matrix_to_dict(self.matrix)
        d.update(kind="contraction", norm_certificate=self.norm_certificate,
                 strict=self.strict)
        return d


@dataclass(frozen=True)
class MDissipative:
    matrix: np.ndarray
    min_imag: float
    strict: bool

    @property
    def n(self):
        return self.matrix.shape[0]

    def to_dict(self):
        from .io import matrix_to_dict

        d = matrix_to_dict(self.matrix)
        d.update(kind="m-dissipative", min_imag=self.min_imag, strict=self.strict)
        return d


@dataclass(frozen=True)
class DilationResult:
    unitary: np.ndarray
    degree: int
    embed_dim: int

    def compression(self, k):
        """Top-left ``n x n`` block of ``U**k``."""
        n = self.embed_dim
        return np.linalg.matrix_power(self.unitary, k)[:n, :n]


@dataclass(frozen=True)
class PairPreprocessReport:
    rotation: complex
    regularized: bool
    replacement_pair: tuple
    s1_perturbation_norm: float
    rotation_index: int = 0


def imaginary_part(a):
    a = np.asarray(a, dtype=complex)
    h = (a - a.conj().T) / 2j
    return (h + h.conj().T) / 2


def real_part(a):
    a = np.asarray(a, dtype=complex)
    h = (a + a.conj().T) / 2
    return (h + h.conj().T) / 2


def check_contraction(a):
    """Wrap ``a`` as a :class:`Contraction` with a certified operator norm."""
    if isinstance(a, Contraction):
        return a
    a = as_square(a)
    norm = nk.operator_norm(a)
    if norm > 1 + CONTRACTION_TOL:
        raise NotContraction(f"operator norm {norm:.12g} exceeds 1")
    return Contraction(a.copy(), norm, norm <= 1 - STRICT_MARGIN)


def check_dissipative(a):
    """Wrap ``a`` as :class:`MDissipative`; requires Im L >= -1e-10."""
    if isinstance(a, MDissipative):
        return a
    a = as_square(a)
    low = float(nk.hermitian_eigen(imaginary_part(a)).values[0]) if a.size else 0.0
    if low < -1e-10:
        raise NotDissipative(f"Im L has eigenvalue {low:.3e} < 0")
    return MDissipative(a.copy(), low, low >= STRICT_MARGIN)


def cayley_T_to_L(t):
    """``L = -iI + 2i(I+T)^{-1}``, m-dissipative for a contraction ``T``."""
    t = check_contraction(t)
    n = t.n
    eye = np.eye(n, dtype=complex)
    try:
        resolvent = nk.solve(eye + t.matrix, eye)
    except SingularToTolerance:
        raise KernelAtMinusOne("I + T is singular; rotate the pair first") from None
    lmat = -1j * eye + 2j * resolvent
    low = float(nk.hermitian_eigen(imaginary_part(lmat)).values[0])
    if low < -1e-9 * max(1.0, nk.operator_norm(lmat)):
        raise NotDissipative(f"Im L has eigenvalue {low:.3e}")
    return MDissipative(lmat, low, low >= STRICT_MARGIN)


def cayley_L_to_T(lmat):
    """``T = (iI - L)(iI + L)^{-1}``; both factors commute."""
    lmat = check_dissipative(lmat)
    eye = np.eye(lmat.n, dtype=complex)
    tmat = nk.solve(1j * eye + lmat.matrix, 1j * eye - lmat.matrix)
    return check_contraction(tmat)


def moebius(z, direction="disk-to-halfplane"):
    """Conformal map ``tau = i(1-lam)/(1+lam)`` between the disk and C+.

    Vectorised over ``z``.  ``direction="halfplane-to-disk"`` applies the
    inverse ``lam = (i - tau)/(i + tau)``.
    """
    z = np.asarray(z, dtype=complex)
    if direction == "disk-to-halfplane":
        if np.any(z == -1):
            raise PoleAtInput("lambda = -1 is mapped to infinity")
        out = 1j * (1 - z) / (1 + z)
    elif direction == "halfplane-to-disk":
        if np.any(z == -1j):
            raise PoleAtInput("tau = -i is mapped to infinity")
        out = (1j - z) / (1j + z)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return complex(out) if out.ndim == 0 else out


def boundary_parameter(theta):
    """Boundary form of the Moebius map: ``e^{i theta} -> tan(theta/2)``."""
    return np.tan(np.asarray(theta, dtype=float) / 2)


def resolvent_identity_check(t, lam):
    """Residual of (L-tau)^{-1} = -(1+lam)/(2i) I - (1+lam)^2/(2i) (T-lam)^{-1}."""
    t = check_contraction(t)
    lam = as_complex_scalar(lam, "lam")
    if abs(lam) <= 1:
        raise ValueError("lam must lie outside the closed unit disk")
    lmat = cayley_T_to_L(t).matrix
    tau = moebius(lam)
    eye = np.eye(t.n, dtype=complex)
    lhs = nk.inv(lmat - tau * eye)
    rhs = -(1 + lam) / 2j * eye - (1 + lam) ** 2 / 2j * nk.inv(t.matrix - lam * eye)
    return nk.operator_norm(lhs - rhs)


def _rotation_order(seed):
    return np.random.Generator(np.random.Philox(seed)).permutation(N_ROOTS)


def _pivot_ok(a, floor=1e-10):
    work = np.asarray(a, dtype=complex)[None].copy()
    _, _, singular = nk._lu_inplace(work)
    if singular[0]:
        return False
    scale = np.abs(a).max()
    return np.abs(np.diagonal(work[0])).min() >= floor * max(scale, 1.0)


def rotate_pair(t0, t1, seed=0):
    """Find a root of unity ``k`` with ``I + k T0`` and ``I + k T1`` invertible.

    The 64 candidates ``exp(2 pi i j / 64)`` are tried in an order fixed by
    ``seed``.  The replacement pair is ``(k T1, k T0)``.
    """
    t0 = check_contraction(t0)
    t1 = check_contraction(t1)
    check_same_shape(t0.matrix, t1.matrix)
    eye = np.eye(t0.n)
    for j in _rotation_order(seed):
        kappa = np.exp(2j * np.pi * j / N_ROOTS)
        if _pivot_ok(eye + kappa * t0.matrix) and _pivot_ok(eye + kappa * t1.matrix):
            pair = (check_contraction(kappa * t1.matrix),
                    check_contraction(kappa * t0.matrix))
            return PairPreprocessReport(complex(kappa), False, pair, 0.0, int(j))
    raise ExhaustedAttempts("no admissible rotation among 64 roots of unity")


def regularize_pair(t0, t1, kernel_tol=1e-10):
    """Replace ``T0`` by an injective contraction ``R`` that agrees with it
    off its kernel.

    ``R = T0 + W K`` with ``K = diag(2^-1, 2^-2, ...)`` on an orthonormal
    basis of ``Ker T0`` and ``W`` an isometry of ``Ker T0`` onto
    ``(Range T0)^perp``.  For square matrices those spaces have equal
    dimension, so no auxiliary space is needed.  The replacement pair is
    ``(T1, R)``; an SSF for the original pair is the difference of the SSFs
    of ``(T1, R)`` and ``(T0, R)``.
    """
    t0 = check_contraction(t0)
    t1 = check_contraction(t1)
    check_same_shape(t0.matrix, t1.matrix)
    svd = nk.singular_value_decomposition(t0.matrix)
    ker = svd.right[:, svd.values < kernel_tol]
    if ker.shape[1] == 0:
        raise KernelNotPresent("T0 is already injective")
    svd_adj = nk.singular_value_decomposition(t0.matrix.conj().T)
    coker = svd_adj.right[:, svd_adj.values < kernel_tol]
    d = ker.shape[1]
    if coker.shape[1] != d:
        raise SingularToTolerance(
            f"kernel ({d}) and cokernel ({coker.shape[1]}) dimensions disagree")
    weights = 0.5 ** np.arange(1, d + 1)
    # W K = sum_j 2^-j c_j k_j^*
    wk = (coker * weights) @ ker.conj().T
    r = check_contraction(t0.matrix + wk)
    report = PairPreprocessReport(1.0 + 0j, True, (t1, r), float(weights.sum()))
    return report


def egervary_dilation(t, degree):
    """Unitary ``U`` on ``C^{(N+1)n}`` with ``P U^k P = T^k`` for ``k <= N``.

    Block form: first row ``(T, 0, ..., 0, D_{T*})``, second row
    ``(D_T, 0, ..., 0, -T*)``, then the identity shift.
    """
    t = check_contraction(t)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    n = t.n
    a = t.matrix
    eye = np.eye(n, dtype=complex)
    d_t = nk.psd_sqrt(eye - a.conj().T @ a)
    d_tstar = nk.psd_sqrt(eye - a @ a.conj().T)
    size = (degree + 1) * n
    u = np.zeros((size, size), dtype=complex)
    u[:n, :n] = a
    u[:n, degree * n:] = d_tstar
    u[n:2 * n, :n] = d_t
    u[n:2 * n, degree * n:] = -a.conj().T
    for k in range(2, degree + 1):
        u[k * n:(k + 1) * n, (k - 1) * n:k * n] = eye
    return DilationResult(u, degree, n)


def unitary_eigen(u, cluster_tol=1e-6):
    """Eigen-decomposition of a unitary matrix via its commuting Hermitian parts.

    ``(U+U*)/2`` is diagonalised first; inside each cluster of (nearly) equal
    eigenvalues ``(U-U*)/(2i)`` is diagonalised, which separates conjugate
    pairs ``e^{+-i theta}``.
    """
    u = as_square(u)
    n = u.shape[0]
    if nk.operator_norm(u.conj().T @ u - np.eye(n)) > 1e-8:
        raise NotUnitary("U^H U differs from I by more than 1e-8")
    re_part = real_part(u)
    im_part = imaginary_part(u)
    first = nk.hermitian_eigen(re_part)
    q = first.vectors.copy()
    vals = first.values
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and vals[stop] - vals[stop - 1] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = q[:, start:stop]
            sub = block.conj().T @ im_part @ block
            inner = nk.hermitian_eigen((sub + sub.conj().T) / 2)
            q[:, start:stop] = block @ inner.vectors
        start = stop
    values = np.einsum("ij,ij->j", q.conj(), u @ q)
    return values, q


def random_unitary(n, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def make_rng(seed, *stream):
    """Counter-based generator keyed by ``seed`` and an optional stream id."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def random_contraction(n, mode="strict", seed=0, norm=0.9):
    """Seeded random contraction.

    ``strict`` rescales a complex Gaussian matrix to operator norm ``norm``;
    ``boundary-touching`` adds a unitary direct summand (conjugated into a
    random basis) so that the norm is exactly 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    if mode == "strict":
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return check_contraction(norm * g / nk.operator_norm(g))
    if mode == "boundary-touching":
        k = max(1, n // 2)
        core = np.zeros((n, n), dtype=complex)
        core[:k, :k] = random_unitary(k, rng)
        if n > k:
            g = rng.normal(size=(n - k, n - k)) + 1j * rng.normal(size=(n - k, n - k))
            core[k:, k:] = norm * g / nk.operator_norm(g)
        basis = random_unitary(n, rng)
        return check_contraction(basis @ core @ basis.conj().T)
    raise ValueError(f"unknown mode {mode!r}")


def random_dissipative(n, seed=0, strict_margin=0.1):
    """Seeded strictly dissipative matrix ``H + i(P + margin I)``."""
    rng = make_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = (g + g.conj().T) / 2
    p = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = p @ p.conj().T / n
    return check_dissipative(h + 1j * (p + strict_margin * np.eye(n)))
