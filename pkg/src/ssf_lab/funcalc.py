"""Functional calculus for disk-algebra functions and boundary Fourier analysis."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import numkernel as nk
from .errors import ContourTooTight, InsufficientDecay
from .validation import as_square, check_grid_size

log = logging.getLogger(__name__)

POLE_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class AnalyticFunction:
    """A function analytic on a neighbourhood of the closed unit disk.

    ``poly`` variant: ``sum_k coeffs[k] z^k``.
    ``rational`` variant: polynomial part plus ``sum_j residues[j] / (z - poles[j])``
    with every pole outside the closed disk.
    ``sampled`` variant: an arbitrary vectorised callable, trusted to be
    analytic on ``|z| <= radius``.
    """

    kind: str
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))
    poles: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    residues: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    func: Optional[Callable] = None
    radius: float = 1.0

    @classmethod
    def polynomial(cls, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        return cls("poly", coeffs=c)

    @classmethod
    def rational(cls, poles, residues, poly=(0.0,)):
        p = np.atleast_1d(np.asarray(poles, dtype=complex))
        r = np.atleast_1d(np.asarray(residues, dtype=complex))
        if p.shape != r.shape:
            raise ValueError("poles and residues must have equal length")
        if np.any(np.abs(p) < 1 + POLE_MARGIN):
            raise ValueError("rational poles must satisfy |pole| >= 1 + 1e-6")
        c = np.atleast_1d(np.asarray(poly, dtype=complex))
        return cls("rational", coeffs=c, poles=p, residues=r)

    @classmethod
    def sampled(cls, func, radius):
        if radius <= 1:
            raise ValueError("sampled functions need a contour radius > 1")
        return cls("sampled", func=func, radius=float(radius))

    @property
    def degree(self):
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "sampled":
            return np.asarray(self.func(z), dtype=complex)
        out = np.polynomial.polynomial.polyval(z, self.coeffs)
        for p, r in zip(self.poles, self.residues):
            out = out + r / (z - p)
        return out

    def deriv(self, z):
        """Closed-form derivative for poly/rational; central FD for sampled."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "sampled":
            h = 1e-5
            return (self(z + h) - self(z - h)) / (2 * h)
        dc = np.polynomial.polynomial.polyder(self.coeffs) if self.coeffs.size > 1 else [0]
        out = np.polynomial.polynomial.polyval(z, dc) * np.ones_like(z)
        for p, r in zip(self.poles, self.residues):
            out = out - r / (z - p) ** 2
        return out

    def derivative(self):
        if self.kind != "poly":
            raise TypeError("derivative() as a function is only closed for polynomials")
        if self.coeffs.size == 1:
            return AnalyticFunction.polynomial([0.0])
        return AnalyticFunction.polynomial(np.polynomial.polynomial.polyder(self.coeffs))

    def __mul__(self, other):
        if self.kind != "poly" or other.kind != "poly":
            return NotImplemented
        return AnalyticFunction.polynomial(
            np.polynomial.polynomial.polymul(self.coeffs, other.coeffs))

    def coefficient_scale(self):
        return float(np.sum(np.abs(self.coeffs)) + np.sum(np.abs(self.residues)))

    def apply(self, t):
        """Evaluate ``f(T)``: Horner for polynomials, resolvents for poles,
        contour quadrature for sampled functions."""
        t = np.asarray(getattr(t, "matrix", t), dtype=complex)
        if self.kind == "sampled":
            return cauchy_funcalc(self, t, r=self.radius)
        out = poly_eval_matrix(self.coeffs, t)
        eye = np.eye(t.shape[0], dtype=complex)
        for p, r in zip(self.poles, self.residues):
            out = out + r * nk.solve(t - p * eye, eye)
        return out

    def taylor_projection(self, degree, r=None, n_nodes=None):
        """Polynomial of the given degree from Taylor coefficients computed
        by FFT on ``|z| = r``."""
        r = r or (self.radius if self.kind == "sampled" else 1.0)
        n_nodes = n_nodes or max(64, 4 * (degree + 1))
        z = r * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
        c = np.fft.fft(self(z)) / n_nodes
        return AnalyticFunction.polynomial(c[:degree + 1] / r ** np.arange(degree + 1))

    def to_dict(self):
        pair = lambda a: [[float(x.real), float(x.imag)] for x in a]
        if self.kind == "poly":
            return {"kind": "poly", "coeffs": pair(self.coeffs)}
        if self.kind == "rational":
            return {"kind": "rational", "poles": pair(self.poles),
                    "residues": pair(self.residues), "poly": pair(self.coeffs)}
        raise TypeError("sampled functions are not serialisable")

    @classmethod
    def from_dict(cls, d):
        def unpair(key):
            vals = d.get(key, [])
            return np.array([complex(*v) if isinstance(v, (list, tuple)) else complex(v)
                             for v in vals], dtype=complex)

        kind = d.get("kind")
        if kind == "poly":
            return cls.polynomial(unpair("coeffs"))
        if kind == "rational":
            poly = unpair("poly")
            return cls.rational(unpair("poles"), unpair("residues"),
                                poly if poly.size else (0.0,))
        raise ValueError(f"unknown function kind {kind!r}")


@dataclass(frozen=True)
class BoundaryGrid:
    """Samples ``values[k]`` at ``radius * exp(2 pi i k / N)``."""

    values: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        check_grid_size(vals.size)
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def N(self):
        return self.values.size

    @property
    def theta(self):
        return 2 * np.pi * np.arange(self.N) / self.N

    @property
    def points(self):
        return self.radius * np.exp(1j * self.theta)

    def line_weights(self):
        """Trapezoid weights for ``d zeta`` along the contour."""
        return 1j * self.points * (2 * np.pi / self.N)

    @classmethod
    def from_function(cls, g, N, radius=1.0):
        theta = 2 * np.pi * np.arange(N) / N
        return cls(np.asarray(g(theta), dtype=complex) * np.ones(N), radius)


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients for frequencies ``m = -N/2 .. N/2 - 1`` (natural order)."""

    coef: np.ndarray

    @property
    def N(self):
        return self.coef.size

    @property
    def frequencies(self):
        return np.arange(-(self.N // 2), self.N - self.N // 2)

    def __getitem__(self, m):
        return self.coef[m + self.N // 2]

    def parseval_defect(self, grid):
        lhs = np.sum(np.abs(self.coef) ** 2)
        rhs = np.mean(np.abs(grid.values) ** 2)
        return abs(lhs - rhs) / max(rhs, 1e-300)


def fourier_transform_grid(g):
    """``g_hat(m) = (1/N) sum_k g(theta_k) exp(-i m theta_k)``."""
    return FourierSeries(np.fft.fftshift(np.fft.fft(g.values)) / g.N)


def inverse_fourier_transform(s, radius=1.0):
    return BoundaryGrid(np.fft.ifft(np.fft.ifftshift(s.coef)) * s.N, radius)


def riesz_project(s, part):
    """``plus`` keeps ``m >= 0``, ``minus`` keeps ``m < 0``."""
    freqs = s.frequencies
    if part == "plus":
        keep = freqs >= 0
    elif part == "minus":
        keep = freqs < 0
    else:
        raise ValueError(f"part must be 'plus' or 'minus', got {part!r}")
    return FourierSeries(np.where(keep, s.coef, 0.0))


def poly_eval_matrix(coeffs, t):
    """Horner evaluation of ``sum_k a_k T^k``."""
    coeffs = getattr(coeffs, "coeffs", coeffs)
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    t = np.asarray(getattr(t, "matrix", t), dtype=complex)
    eye = np.eye(t.shape[0], dtype=complex)
    out = coeffs[-1] * eye
    for a in coeffs[-2::-1]:
        out = out @ t + a * eye
    return out


def default_radius(norm):
    return 1.0 + max(0.1, (1.0 - norm) / 2)


def cauchy_funcalc(f, t, r=None, N=256):
    """``f(T) = (2 pi i)^{-1} \\oint_{|lam|=r} f(lam) (lam I - T)^{-1} d lam``.

    Trapezoid rule with ``N`` equispaced nodes.  A von Neumann witness
    ``||f(T)|| <= max_grid |f| + 1e-6`` is checked for contractions and
    logged (not raised) when it fails.
    """
    t = as_square(getattr(t, "matrix", t))
    norm = nk.operator_norm(t)
    if r is None:
        r = default_radius(norm)
    if r <= norm + 1e-6:
        raise ContourTooTight(f"contour radius {r} does not clear ||T|| = {norm:.6g}")
    n = t.shape[0]
    lam = r * np.exp(2j * np.pi * np.arange(N) / N)
    eye = np.eye(n, dtype=complex)
    res = nk.solve(lam[:, None, None] * eye - t, eye)
    weights = f(lam) * lam / N
    out = np.einsum("k,kij->ij", weights, res)
    if norm <= 1 + 1e-10:
        bound = np.max(np.abs(f(np.exp(2j * np.pi * np.arange(4096) / 4096))))
        got = nk.operator_norm(out)
        if got > bound + 1e-6:
            log.warning("von Neumann witness failed: ||f(T)|| = %.3e > %.3e", got, bound)
    return out


def poisson_halfplane(t, boundary, z, tail_tol=1e-6):
    """Poisson extension of real boundary samples to a point of C+ (or C-).

    ``(1/pi) \\int |Im z| / ((t - Re z)^2 + (Im z)^2) b(t) dt`` by the composite
    trapezoid rule on the supplied sorted grid.  The lower half-plane is
    handled by reflection.  Samples at the grid edges must be small relative
    to the largest sample, and the tail beyond the grid (estimated from the
    edge samples under ``O(t^-2)`` decay) must stay below ``tail_tol``.
    """
    t = np.asarray(t, dtype=float)
    b = np.asarray(boundary, dtype=float)
    if t.shape != b.shape or t.ndim != 1:
        raise ValueError("grid and samples must be 1-D arrays of equal length")
    y = abs(complex(z).imag)
    x = complex(z).real
    if y < 1e-3:
        raise ValueError("|Im z| must be at least 1e-3")
    peak = np.max(np.abs(b))
    edge = max(abs(b[0]), abs(b[-1]))
    if peak > 0 and edge > 1e-4 * peak:
        raise InsufficientDecay(f"edge samples {edge:.3e} exceed 1e-4 * max")
    kernel = y / ((t - x) ** 2 + y ** 2) / np.pi
    value = np.trapezoid(kernel * b, t)
    # tail: |b| <= C/t^2 beyond the edges, kernel <= y/(pi t^2)
    tail = 0.0
    for end, val in ((t[0], b[0]), (t[-1], b[-1])):
        dist = abs(end - x)
        if dist > 0:
            c = abs(val) * end ** 2
            tail += y * c / (3 * np.pi * dist ** 3)
    if tail > tail_tol:
        raise InsufficientDecay(f"tail estimate {tail:.3e} exceeds {tail_tol:.1e}")
    return float(value)


def symmetric_log_grid(t_min=1e-8, t_max=1e3, n_per_side=8192):
    """Symmetric grid on the real line, log-spaced away from 0."""
    pos = np.geomspace(t_min, t_max, n_per_side)
    return np.concatenate([-pos[::-1], pos])


def graded_grid(singular_points, t_max=1e3, base=4096, cluster=400, h_min=1e-12):
    """Sorted grid on ``[-t_max, t_max]`` refined geometrically around given
    points, so that the trapezoid rule tolerates logarithmic singularities."""
    pieces = [np.sinh(np.linspace(-np.arcsinh(t_max), np.arcsinh(t_max), base))]
    for c in np.atleast_1d(np.asarray(singular_points, dtype=float)):
        off = np.geomspace(h_min, 1.0, cluster)
        pieces.append(c - off)
        pieces.append(c + off)
    grid = np.unique(np.concatenate(pieces))
    grid = grid[(grid >= -t_max) & (grid <= t_max)]
    singular = np.atleast_1d(np.asarray(singular_points, dtype=float))
    if singular.size:
        # never sample exactly at a singular point
        grid = grid[np.min(np.abs(grid[:, None] - singular[None, :]), axis=1) > 0]
    return grid
