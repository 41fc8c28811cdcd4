"""Argument checks shared by the estimator facades and the pipelines."""

from __future__ import annotations

from .trajectory import Trajectory


def check_trajectory(t: object, *, require_processed: bool = False, min_fixes: int = 0) -> Trajectory:
    """Validate that `t` is a usable trajectory and return it.

    Raises
    ------
    TypeError
        If `t` is not a Trajectory.
    ValueError
        If preprocessing is required but missing, or the fix count is too low.
    """
    if not isinstance(t, Trajectory):
        raise TypeError(f"expected a Trajectory, got {type(t).__name__}")
    if require_processed and not t.processed:
        raise ValueError("trajectory must be preprocessed first; run preprocess() on it")
    if len(t) < min_fixes:
        raise ValueError(f"trajectory needs at least {min_fixes} fixes, got {len(t)}")
    return t


def check_positive(name: str, value: float) -> float:
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value
