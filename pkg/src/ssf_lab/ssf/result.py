"""Container for a spectral shift function sampled on a boundary grid."""

from dataclasses import dataclass, field, replace

import numpy as np

from ..funcalc import BoundaryGrid, FourierSeries

REPRESENTATIVES = ("anti-analytic", "real-argument", "imaginary-modulus", "flattened")


@dataclass(frozen=True)
class SSFResult:
    """One representative of the SSF class of a pair.

    ``grid`` holds the samples.  In the disk domain they sit at
    ``radius * exp(i theta_k)``; in the half-plane domain the same angular grid
    is read through ``t = tan(theta/2)``.  ``neg_fourier`` keeps only the
    frequencies ``m < 0`` (rescaled to the unit circle), which is the part of
    an SSF that the pair determines.
    """

    grid: BoundaryGrid
    representative: str
    neg_fourier: FourierSeries
    residuals: dict = field(default_factory=dict)
    domain: str = "disk"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.representative not in REPRESENTATIVES:
            raise ValueError(f"unknown representative {self.representative!r}")
        if self.domain not in ("disk", "halfplane"):
            raise ValueError(f"unknown domain {self.domain!r}")

    @property
    def values(self):
        return self.grid.values

    @property
    def theta(self):
        return self.grid.theta

    @property
    def N(self):
        return self.grid.N

    @property
    def points(self):
        """Contour points (disk) or real abscissae ``tan(theta/2)`` (half-plane)."""
        if self.domain == "disk":
            return self.grid.points
        with np.errstate(over="ignore"):
            t = np.tan(self.theta / 2)
        t[self.N // 2] = np.inf
        return t

    def with_residuals(self, **items):
        res = dict(self.residuals)
        res.update({k: float(v) for k, v in items.items()})
        return replace(self, residuals=res)


def negative_part(values, radius=1.0):
    """Fourier coefficients of ``values`` with ``m < 0`` kept, rescaled by ``r^|m|``."""
    n = values.size
    coef = np.fft.fftshift(np.fft.fft(values)) / n
    freqs = np.arange(-(n // 2), n - n // 2)
    scale = np.where(freqs < 0, float(radius) ** np.abs(freqs).astype(float), 0.0)
    return FourierSeries(coef * scale)
