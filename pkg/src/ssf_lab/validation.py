"""Input validation helpers used at every public entry point."""

import numbers

import numpy as np

from .errors import DimensionMismatch


def as_matrix(a, name="A"):
    """Return ``a`` as a finite 2-D complex array (a copy is not forced)."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def as_square(a, name="A"):
    arr = as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_stack(a, name="A"):
    """Square matrix or stack of square matrices with shape (..., n, n)."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DimensionMismatch(f"{name} must have shape (..., n, n), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_same_shape(*mats):
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(shapes)}")


def as_complex_scalar(z, name="z"):
    if not isinstance(z, numbers.Number) and np.ndim(z) != 0:
        raise TypeError(f"{name} must be a scalar")
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite")
    return z


def is_power_of_two(n):
    return isinstance(n, numbers.Integral) and n > 0 and (n & (n - 1)) == 0


def check_grid_size(n, minimum=16, name="N"):
    if not is_power_of_two(n) or n < minimum:
        raise ValueError(f"{name} must be a power of two >= {minimum}, got {n!r}")
    return int(n)
