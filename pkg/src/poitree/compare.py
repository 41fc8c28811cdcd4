"""Batch evaluation of the extraction methods over many trajectories.

Runs each configured method on each user, recording place counts, the
entropy / predictability ceiling of the resulting visit sequence, and the
wall time of the method call itself (preprocessing and sequence analysis are
excluded from the timing). A parameter sweep re-runs every method once per
value of one numeric knob. Failures are captured per row rather than
aborting the batch.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from statistics import median
from typing import Callable, Iterable, Sequence

from .baselines import PipelineResult, sp_dbscan, sp_linkage, sp_optics
from .extraction import extract_pois
from .predictability import (
    predictability_limit,
    sequence_from_labels,
    sequence_from_tree,
)
from .tree import PoiThresholds, TIER_LOCAL
from .trajectory import (
    DEFAULT_GAP_THRESHOLD_S,
    DEFAULT_MAX_ACCURACY_M,
    Trajectory,
    preprocess,
)

METHOD_TREE = "tree"
METHODS = (METHOD_TREE, "sp_dbscan", "sp_optics", "sp_linkage_db", "sp_linkage_sc")

# RunConfig fields a sweep may vary.
SWEEPABLE = (
    "f_vd_global",
    "d_vd_global",
    "f_vd_local",
    "d_vd_local",
    "eps_m",
    "sp_delta_s",
    "sp_theta_m",
    "xi",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a comparison run needs besides the trajectories."""

    methods: tuple[str, ...] = METHODS
    f_vd_global: float = 0.63
    d_vd_global: float = 120.0
    f_vd_local: float = 0.13
    d_vd_local: float = 30.0
    gap_threshold_s: int = DEFAULT_GAP_THRESHOLD_S
    max_accuracy_m: float = DEFAULT_MAX_ACCURACY_M
    sp_delta_s: int = 1800
    sp_theta_m: float = 50.0
    eps_m: float = 50.0
    min_pts: int | None = None
    xi: float = 0.05
    cluster_cap: int | None = None
    day_offset_min: int = 0
    parallelism: int = 1
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
        if self.sweep_param is not None and self.sweep_param not in SWEEPABLE:
            raise ValueError(f"sweep parameter must be one of {SWEEPABLE}, got {self.sweep_param!r}")
        if self.sweep_param is not None and not self.sweep_values:
            raise ValueError("sweep_values must be non-empty when sweep_param is set")


@dataclass(frozen=True)
class EvaluationRow:
    """One method applied to one user under one parameter variant."""

    user_id: str
    method: str
    variant: str
    n_fixes: int
    n_staypoints: int | None
    poi_count: int | None
    global_poi_count: int | None
    entropy_bits: float | None
    predictability: float | None
    wall_time_s: float
    error: str = ""


CSV_COLUMNS = [f.name for f in fields(EvaluationRow)]


def _variants(config: RunConfig) -> list[tuple[RunConfig, str]]:
    if config.sweep_param is None:
        return [(config, "")]
    out = []
    for value in config.sweep_values:
        variant = replace(config, **{config.sweep_param: value})
        out.append((variant, f"{config.sweep_param}={value:g}"))
    return out


def _sequence_metrics(build_sequence: Callable[[], object]) -> tuple[float | None, float | None]:
    try:
        seq = build_sequence()
    except ValueError:
        return None, None
    result = predictability_limit(seq)
    return result.entropy_bits, result.pi_max


def _run_method(t: Trajectory, method: str, cfg: RunConfig, variant: str) -> EvaluationRow:
    base = dict(
        user_id=t.user_id,
        method=method,
        variant=variant,
        n_fixes=len(t),
        n_staypoints=None,
        poi_count=None,
        global_poi_count=None,
        entropy_bits=None,
        predictability=None,
        wall_time_s=0.0,
    )
    try:
        start = time.perf_counter()
        if method == METHOD_TREE:
            tree = extract_pois(
                t,
                global_thresholds=PoiThresholds(cfg.f_vd_global, cfg.d_vd_global),
                local_thresholds=PoiThresholds(cfg.f_vd_local, cfg.d_vd_local),
            )
            elapsed = time.perf_counter() - start
            entropy, pi = _sequence_metrics(lambda: sequence_from_tree(t, tree, TIER_LOCAL))
            return EvaluationRow(
                **{
                    **base,
                    "poi_count": tree.place_count(),
                    "global_poi_count": len(tree.global_pois),
                    "entropy_bits": entropy,
                    "predictability": pi,
                    "wall_time_s": elapsed,
                }
            )
        result = _run_baseline(t, method, cfg)
        elapsed = time.perf_counter() - start
        entropy, pi = _sequence_metrics(lambda: sequence_from_labels(result.clusters.labels))
        return EvaluationRow(
            **{
                **base,
                "n_staypoints": len(result.staypoints),
                "poi_count": result.clusters.n_clusters,
                "entropy_bits": entropy,
                "predictability": pi,
                "wall_time_s": elapsed,
            }
        )
    except (ValueError, ArithmeticError) as exc:
        return EvaluationRow(**{**base, "wall_time_s": time.perf_counter() - start, "error": str(exc)})


def _run_baseline(t: Trajectory, method: str, cfg: RunConfig) -> PipelineResult:
    if method == "sp_dbscan":
        return sp_dbscan(t, delta_s=cfg.sp_delta_s, theta_m=cfg.sp_theta_m, eps_m=cfg.eps_m, min_pts=cfg.min_pts)
    if method == "sp_optics":
        return sp_optics(t, delta_s=cfg.sp_delta_s, theta_m=cfg.sp_theta_m, min_pts=cfg.min_pts, xi=cfg.xi)
    if method == "sp_linkage_db":
        return sp_linkage(t, criterion="db", delta_s=cfg.sp_delta_s, theta_m=cfg.sp_theta_m, cluster_cap=cfg.cluster_cap)
    if method == "sp_linkage_sc":
        return sp_linkage(t, criterion="sc", delta_s=cfg.sp_delta_s, theta_m=cfg.sp_theta_m, cluster_cap=cfg.cluster_cap)
    raise ValueError(f"unknown method {method!r}")


def evaluate_user(t: Trajectory, config: RunConfig) -> list[EvaluationRow]:
    """All methods x variants for one trajectory; preprocesses it if raw."""
    if not t.processed:
        t = preprocess(
            t, gap_threshold_s=config.gap_threshold_s, max_accuracy_m=config.max_accuracy_m
        )
    rows = []
    for cfg, variant in _variants(config):
        for method in config.methods:
            rows.append(_run_method(t, method, cfg, variant))
    return rows


def _evaluate_user_args(args: tuple[Trajectory, RunConfig]) -> list[EvaluationRow]:
    return evaluate_user(*args)


def run_compare(trajectories: Sequence[Trajectory], config: RunConfig) -> list[EvaluationRow]:
    """Evaluate every configured method on every trajectory.

    With parallelism > 1 the users are distributed over worker processes;
    rows come back in user order either way.
    """
    if config.parallelism > 1 and len(trajectories) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            nested = list(pool.map(_evaluate_user_args, [(t, config) for t in trajectories]))
    else:
        nested = [evaluate_user(t, config) for t in trajectories]
    return [row for rows in nested for row in rows]


def _median_of(values: Iterable[float | int | None]) -> float | None:
    kept = [v for v in values if v is not None]
    return float(median(kept)) if kept else None


def summarize(rows: Sequence[EvaluationRow]) -> dict:
    """Per method (and sweep variant) medians across users."""
    groups: dict[tuple[str, str], list[EvaluationRow]] = {}
    for row in rows:
        groups.setdefault((row.method, row.variant), []).append(row)
    out = []
    for (method, variant), group in sorted(groups.items()):
        ok = [r for r in group if not r.error]
        out.append(
            {
                "method": method,
                "variant": variant,
                "users": len(group),
                "errors": len(group) - len(ok),
                "median_poi_count": _median_of(r.poi_count for r in ok),
                "median_global_poi_count": _median_of(r.global_poi_count for r in ok),
                "median_entropy_bits": _median_of(r.entropy_bits for r in ok),
                "median_predictability": _median_of(r.predictability for r in ok),
                "median_wall_time_s": _median_of(r.wall_time_s for r in ok),
            }
        )
    return {"methods": out}


def rows_to_csv(rows: Sequence[EvaluationRow], stream: io.TextIOBase | None = None) -> str | None:
    """Write rows as CSV; returns the text when no stream is given."""
    own = stream is None
    target = io.StringIO() if own else stream
    writer = csv.writer(target)
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            ["" if getattr(row, col) is None else getattr(row, col) for col in CSV_COLUMNS]
        )
    return target.getvalue() if own else None
