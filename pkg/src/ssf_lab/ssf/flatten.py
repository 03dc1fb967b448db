"""Real representatives obtained by flattening with Riesz projections."""

from dataclasses import replace

import numpy as np

from ..funcalc import BoundaryGrid, FourierSeries, fourier_transform_grid, riesz_project
from .result import SSFResult, negative_part


def _values(ssf):
    if isinstance(ssf, SSFResult):
        return ssf.values, ssf.grid.radius
    if isinstance(ssf, BoundaryGrid):
        return ssf.values, ssf.radius
    return np.asarray(ssf, dtype=complex), 1.0


def flatten_values(values):
    """``Re xi + i P_-(Im xi) - i conj(P_-(Im xi))`` on a uniform grid."""
    values = np.asarray(values, dtype=complex)
    grid = BoundaryGrid(values.imag + 0j)
    minus = riesz_project(fourier_transform_grid(grid), "minus")
    p_minus = np.fft.ifft(np.fft.ifftshift(minus.coef)) * values.size
    flat = values.real + 1j * p_minus - 1j * np.conj(p_minus)
    return flat


def flatten_real(ssf):
    """Real representative in the same class as ``ssf``.

    The difference ``xi - xi_flat = i (Im xi - 2 Re P_- Im xi)`` has no
    negative frequencies: on a grid ``Im xi = P_+ + P_-`` and
    ``conj(P_- Im xi)`` has strictly positive frequencies.  Residuals
    ``imag_part`` and ``negative_defect`` record both postconditions.
    """
    values, radius = _values(ssf)
    flat = flatten_values(values)
    imag = float(np.max(np.abs(flat.imag)))
    flat_real = flat.real + 0j
    diff = negative_part(values - flat_real)
    defect = float(np.max(np.abs(diff.coef[1:])))
    grid = BoundaryGrid(flat_real, radius)
    neg = negative_part(flat_real, radius)
    if isinstance(ssf, SSFResult):
        res = dict(ssf.residuals)
        res.update(imag_part=imag, negative_defect=defect)
        return replace(ssf, grid=grid, representative="flattened", neg_fourier=neg,
                       residuals=res, meta=dict(ssf.meta, zygmund=zygmund_functional(ssf)))
    return SSFResult(grid, "flattened", neg, {"imag_part": imag, "negative_defect": defect},
                     "disk", {"zygmund": zygmund_functional(values)})


def zygmund_functional(ssf):
    """Grid mean of ``Im xi * log(1 + |Im xi|)``."""
    values, _ = _values(ssf)
    im = values.imag
    return float(np.mean(im * np.log1p(np.abs(im))))
