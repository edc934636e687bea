"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError, InputError, ShapeMismatch


def check_matrix(A, *, square: bool = True, name: str = "A") -> np.ndarray:
    """Return ``A`` as a finite 2-D float array, copying only when needed.

    Parameters
    ----------
    A : array-like
        Candidate matrix.
    square : bool, default=True
        Require ``A.shape[0] == A.shape[1]``.
    name : str
        Used in error messages.

    Raises
    ------
    ShapeMismatch
        If ``A`` is not 2-D, is empty, or is not square when ``square`` is set.
    InputError
        If any entry is NaN or infinite, or cannot be cast to float.
    """
    try:
        arr = np.asarray(A, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not a real numeric array: {exc}") from None
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def check_vector(x, n: int | None = None, *, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ShapeMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ShapeMismatch(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def check_points(vertices, *, min_points: int = 3, max_points: int = 64) -> np.ndarray:
    """Return vertices as an ``(n, 2)`` float array with ``min_points <= n <= max_points``."""
    try:
        arr = np.asarray(vertices, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"vertices are not numeric: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ShapeMismatch(f"vertices must have shape (n, 2), got {arr.shape}")
    n = arr.shape[0]
    if not min_points <= n <= max_points:
        raise DomainError(f"polygon must have between {min_points} and {max_points} vertices, got {n}")
    if not np.all(np.isfinite(arr)):
        raise InputError("vertices have non-finite coordinates")
    return arr


def check_nonnegative_scalar(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise InputError(f"{name} must be a finite number >= 0, got {value}")
    return value


def matrix_scale(A: np.ndarray) -> float:
    """``1 + ||A||_F``, the reference scale for every relative tolerance."""
    return 1.0 + float(np.linalg.norm(A))
