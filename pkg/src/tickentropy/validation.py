"""Small input-validation helpers used throughout the package."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def as_float_1d(x, name: str = "values", allow_empty: bool = True) -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array, rejecting higher dimensions."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not allow_empty and arr.size == 0:
        raise ValidationError(f"{name} must not be empty")
    return arr


def check_finite(arr: np.ndarray, name: str = "values") -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def check_in_range(value, name: str, low=None, high=None,
                   inclusive: str = "both"):
    """Check a scalar against open/closed bounds.

    ``inclusive`` is one of ``"both"``, ``"low"``, ``"high"``, ``"neither"``.
    """
    if low is not None:
        lo_ok = value >= low if inclusive in ("both", "low") else value > low
        if not lo_ok:
            raise ValidationError(f"{name}={value!r} out of range (low bound {low})")
    if high is not None:
        hi_ok = value <= high if inclusive in ("both", "high") else value < high
        if not hi_ok:
            raise ValidationError(f"{name}={value!r} out of range (high bound {high})")
    return value


def check_positive_int(value, name: str) -> int:
    if not (isinstance(value, (int, np.integer)) and not isinstance(value, bool)) or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
