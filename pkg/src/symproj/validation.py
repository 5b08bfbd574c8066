"""Input checks shared by the estimator API."""

from __future__ import annotations

import numpy as np

__all__ = ["check_operator", "check_states"]


def check_operator(X, *, hermitian: bool = True, tol: float = 1e-10, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite square complex128 array.

    Complex input is accepted, unlike :func:`sklearn.utils.check_array`.
    """
    arr = np.asarray(getattr(X, "entries", X))
    if arr.dtype == object:
        raise TypeError(f"{name} must be numeric")
    arr = arr.astype(np.complex128, copy=False)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity")
    if hermitian:
        dev = float(np.max(np.abs(arr - arr.conj().T)))
        if dev > tol:
            raise ValueError(f"{name} must be Hermitian (max |X - X^H| = {dev:.3e})")
    return arr


def check_states(X, dim: int, name: str = "X") -> tuple[np.ndarray, bool]:
    """Return states as rows of a 2-D complex array and whether ``X`` was 1-D."""
    arr = np.asarray(X)
    if arr.dtype == object:
        raise TypeError(f"{name} must be numeric")
    arr = arr.astype(np.complex128, copy=False)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D, got {arr.ndim}-D")
    if arr.shape[1] != dim:
        raise ValueError(f"{name} has {arr.shape[1]} features, but the projector expects {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity")
    return arr, squeeze
