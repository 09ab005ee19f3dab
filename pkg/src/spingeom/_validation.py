"""Input checks shared by the estimator layer and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .hilbert import SystemConfig


def check_config(n_spins, twice_spin, coupling=1.0) -> SystemConfig:
    """Build a :class:`SystemConfig`, turning bad values into ``ValueError``."""
    return SystemConfig.create(n_spins, twice_spin, coupling)


def check_points(X, n_features: int, names: tuple[str, ...] | None = None) -> np.ndarray:
    """2-D finite float array with exactly ``n_features`` columns.

    A 1-D input is accepted when ``n_features == 1`` and treated as a column.
    """
    X = np.asarray(X, dtype=float) if not hasattr(X, "iloc") else X
    if n_features == 1 and np.ndim(X) == 1:
        X = np.reshape(X, (-1, 1))
    X = check_array(X, dtype=float, ensure_2d=True, ensure_all_finite=True)
    if X.shape[1] != n_features:
        label = f" ({', '.join(names)})" if names else ""
        raise ValueError(f"expected {n_features} columns{label}, got {X.shape[1]}")
    return X


def check_theta(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > np.pi)):
        raise ValueError("theta must lie in [0, pi]")
    return theta


def check_nonnegative(values, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if np.any(values < 0):
        raise ValueError(f"{name} must be >= 0")
    return values


def relative_error(value, reference, floor: float = 1e-12):
    """``|value - reference| / max(|reference|, floor)``."""
    value, reference = np.asarray(value, dtype=float), np.asarray(reference, dtype=float)
    err = np.abs(value - reference) / np.maximum(np.abs(reference), floor)
    return float(err) if err.ndim == 0 else err


def metric_relative_error(numeric: np.ndarray, closed: np.ndarray, floor: float = 1e-8) -> float:
    """Worst componentwise relative error of a metric matrix.

    Components whose reference value is below ``floor`` times the Frobenius
    norm of the reference (those that vanish identically) are measured
    against that norm instead.
    """
    norm = np.linalg.norm(closed)
    diff = np.abs(numeric - closed)
    nonzero = np.abs(closed) > floor * norm
    err = np.where(nonzero, diff / np.where(nonzero, np.abs(closed), 1.0), diff / norm)
    return float(np.max(err))
