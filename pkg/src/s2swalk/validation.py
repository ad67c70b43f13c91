"""Input-validation helpers used across the package."""
import math

import numpy as np

from .errors import InvalidArgumentError


def as_finite_array(name, value, shape=None):
    """Coerce to a float ndarray, checking shape and finiteness."""
    arr = np.asarray(value, dtype=float)
    if shape is not None and arr.shape != shape:
        raise InvalidArgumentError(
            f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    return arr


def as_finite_float(name, value):
    v = float(value)
    if not math.isfinite(v):
        raise InvalidArgumentError(f"{name} must be finite")
    return v


def require(condition, message):
    if not condition:
        raise InvalidArgumentError(message)
