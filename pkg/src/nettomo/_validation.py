"""Input coercion shared by the functional API and the estimators."""
from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .netgraph import RoutingMatrix


def check_routing(routing) -> RoutingMatrix:
    """Accept a RoutingMatrix, a 0/1 array-like, or anything with ``entries``."""
    if isinstance(routing, RoutingMatrix):
        return routing
    try:
        arr = np.asarray(routing)
    except Exception as exc:  # ragged lists and the like
        raise ValidationError(f"cannot interpret routing matrix: {exc}") from exc
    if arr.dtype == object:
        raise ValidationError("routing matrix must be numeric")
    if arr.ndim != 2:
        raise ValidationError(f"routing matrix must be 2-D, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValidationError("routing matrix entries must be 0 or 1")
    return RoutingMatrix(arr.astype(np.int64))


def check_vector(values, length: int | None = None, name: str = "vector",
                 nonnegative: bool = False) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if length is not None and v.shape[0] != length:
        raise ValidationError(f"{name} has length {v.shape[0]}, expected {length}")
    if not np.isfinite(v).all():
        raise ValidationError(f"{name} contains non-finite values")
    if nonnegative and (v < 0).any():
        raise ValidationError(f"{name} must be non-negative")
    return v


def check_indicators(indicators, length: int) -> np.ndarray:
    v = np.asarray(indicators)
    if v.shape != (length,):
        raise ValidationError(f"indicator vector must have length {length}")
    if not np.isin(v, (0, 1)).all():
        raise ValidationError("indicators must be 0/1")
    return v.astype(np.int64)


def check_random_state(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
