"""Stay-point clustering baselines: DBSCAN, OPTICS, and optimized linkage cuts.

These are the conventional pipelines the tree extractor is compared against:
detect stay points first, then cluster their centroids. DBSCAN works on
absolute (great-circle) distances; OPTICS and the Davies-Bouldin / silhouette
cut searches work in the projected plane, where relative distances are all
they need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.cluster import OPTICS as _SkOptics
from sklearn.metrics import davies_bouldin_score, silhouette_score

from .geo import GeoPoint, haversine_pairwise_m, pairwise_matrix, project_equirectangular
from .hclust import cut, linkage_complete
from .staypoint import DEFAULT_DELTA_S, DEFAULT_THETA_M, StayPoint, detect_staypoints
from .trajectory import Trajectory

DEFAULT_EPS_M = 50.0
DEFAULT_XI = 0.05


@dataclass(frozen=True)
class LabeledClusters:
    """Cluster labels over a point list: -1 is noise, real ids run 0..n_clusters-1."""

    labels: np.ndarray
    n_clusters: int


@dataclass(frozen=True)
class BaselineParams:
    """Shared baseline parameters derived from the stay-point count."""

    min_pts: int
    cluster_cap: int

    @classmethod
    def from_count(cls, n: int) -> "BaselineParams":
        # round-half-up of log10(n), floored at 2
        min_pts = 2 if n < 1 else max(2, math.floor(math.log10(n) + 0.5))
        return cls(min_pts=min_pts, cluster_cap=n // 2)


def _relabel_first_occurrence(labels: np.ndarray) -> LabeledClusters:
    """Make non-noise ids contiguous from 0 in order of first appearance."""
    out = np.full(len(labels), -1, dtype=np.int64)
    mapping: dict[int, int] = {}
    for i, lab in enumerate(labels):
        if lab == -1:
            continue
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return LabeledClusters(labels=out, n_clusters=len(mapping))


def dbscan(points: Sequence[GeoPoint], eps_m: float = DEFAULT_EPS_M, min_pts: int = 2) -> LabeledClusters:
    """Density clustering on great-circle distances.

    A point is core when its eps-neighborhood (self included) holds at least
    min_pts points. Clusters are grown one at a time in input order, so a
    border point reachable from several clusters joins the first one
    discovered. Points in no neighborhood stay noise (-1).

    Parameters
    ----------
    points : sequence of GeoPoint
    eps_m : float
        Neighborhood radius in meters.
    min_pts : int
        Density threshold, >= 1.

    Returns
    -------
    LabeledClusters
    """
    n = len(points)
    if min_pts < 1:
        raise ValueError(f"min_pts must be >= 1, got {min_pts}")
    if eps_m <= 0:
        raise ValueError(f"eps_m must be positive, got {eps_m}")
    if n == 0:
        return LabeledClusters(labels=np.empty(0, dtype=np.int64), n_clusters=0)

    lats = np.array([p[0] for p in points])
    lons = np.array([p[1] for p in points])
    dist = haversine_pairwise_m(lats, lons)
    neighborhoods = [np.flatnonzero(dist[i] <= eps_m) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neighborhoods])

    labels = np.full(n, -1, dtype=np.int64)
    cluster = 0
    for start in range(n):
        if labels[start] != -1 or not core[start]:
            continue
        labels[start] = cluster
        frontier = [start]
        while frontier:
            p = frontier.pop()
            for q in neighborhoods[p]:
                if labels[q] == -1:
                    labels[q] = cluster
                    if core[q]:
                        frontier.append(q)
        cluster += 1
    return LabeledClusters(labels=labels, n_clusters=cluster)


@dataclass(frozen=True)
class OpticsAnalysis:
    """Raw OPTICS outputs plus the extracted clusters."""

    ordering: np.ndarray
    reachability: np.ndarray
    clusters: LabeledClusters


def optics_analysis(
    points: Sequence[GeoPoint],
    min_pts: int,
    xi: float = DEFAULT_XI,
) -> OpticsAnalysis:
    """OPTICS ordering with unbounded generating distance, clusters by xi-steepness.

    Runs in the projected plane (the ordering only needs relative distances).
    With fewer points than min_pts everything is noise.
    """
    if min_pts < 2:
        raise ValueError(f"min_pts must be >= 2, got {min_pts}")
    n = len(points)
    if n < min_pts:
        return OpticsAnalysis(
            ordering=np.arange(n, dtype=np.int64),
            reachability=np.full(n, np.inf),
            clusters=LabeledClusters(labels=np.full(n, -1, dtype=np.int64), n_clusters=0),
        )
    planar, _ = project_equirectangular(points)
    model = _SkOptics(min_samples=min_pts, max_eps=np.inf, cluster_method="xi", xi=xi)
    model.fit(planar)
    return OpticsAnalysis(
        ordering=model.ordering_.astype(np.int64),
        reachability=model.reachability_,
        clusters=_relabel_first_occurrence(model.labels_),
    )


def optics_clusters(points: Sequence[GeoPoint], min_pts: int, xi: float = DEFAULT_XI) -> LabeledClusters:
    """Clusters from the xi-steepness extraction; see :func:`optics_analysis`."""
    return optics_analysis(points, min_pts, xi).clusters


def db_index(points: np.ndarray, labels: np.ndarray) -> float:
    """Davies-Bouldin index: mean over clusters of the worst (s_i+s_j)/d(c_i,c_j).

    Lower is better; two well-separated singletons score 0. Requires at least
    2 clusters with labels 0..k-1.
    """
    labels = np.asarray(labels)
    k = len(np.unique(labels))
    if k < 2:
        raise ValueError("db_index requires at least 2 clusters")
    if k == len(labels):
        # All clusters are singletons: every within-cluster scatter is 0, so
        # every pairwise ratio (and the index) is 0.
        return 0.0
    return float(davies_bouldin_score(np.asarray(points, dtype=float), labels))


def silhouette(points: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette (b - a) / max(a, b); singleton clusters contribute 0."""
    labels = np.asarray(labels)
    k = len(np.unique(labels))
    if k < 2:
        raise ValueError("silhouette requires at least 2 clusters")
    if k >= len(labels):
        raise ValueError("silhouette requires at least one non-singleton cluster")
    return float(silhouette_score(np.asarray(points, dtype=float), labels))


@dataclass(frozen=True)
class LinkageSearch:
    """Result of the criterion-optimized cut search."""

    clusters: LabeledClusters
    best_n: int
    best_value: float
    values: dict[int, float]


def optimize_linkage(
    points: Sequence[GeoPoint],
    criterion: str = "db",
    cluster_cap: int | None = None,
) -> LinkageSearch:
    """Scan complete-linkage cuts n in [2, cap] for the best internal index.

    criterion "db" minimizes the Davies-Bouldin index; "sc" maximizes the
    silhouette coefficient. Ties keep the smallest n. Cuts where the index is
    undefined (e.g. all points coincide) are skipped.

    Parameters
    ----------
    points : sequence of GeoPoint
        Stay-point centroids; at least 4 so that the cap N/2 is >= 2.
    criterion : {"db", "sc"}
    cluster_cap : int, optional
        Defaults to len(points) // 2.

    Returns
    -------
    LinkageSearch
    """
    if criterion not in ("db", "sc"):
        raise ValueError(f"criterion must be 'db' or 'sc', got {criterion!r}")
    n = len(points)
    cap = n // 2 if cluster_cap is None else min(cluster_cap, n - 1)
    if n < 4 or cap < 2:
        raise ValueError(f"optimize_linkage needs >= 4 points (cap >= 2), got {n} (cap {cap})")

    planar, _ = project_equirectangular(points)
    dend = linkage_complete(pairwise_matrix(planar))
    best_n = -1
    best_value = math.inf if criterion == "db" else -math.inf
    best_assignment = None
    values: dict[int, float] = {}
    for k in range(2, cap + 1):
        assignment = cut(dend, k)
        try:
            value = db_index(planar, assignment.labels) if criterion == "db" else silhouette(planar, assignment.labels)
        except ValueError:
            continue
        if not math.isfinite(value):
            continue
        values[k] = value
        better = value < best_value if criterion == "db" else value > best_value
        if better:
            best_n, best_value, best_assignment = k, value, assignment
    if best_assignment is None:
        raise ValueError("no cut in [2, cap] yielded a defined criterion value")
    return LinkageSearch(
        clusters=LabeledClusters(labels=best_assignment.labels, n_clusters=best_assignment.n_clusters),
        best_n=best_n,
        best_value=best_value,
        values=values,
    )


# ---------------------------------------------------------------------------
# full stay-point pipelines

@dataclass(frozen=True)
class PipelineResult:
    """Stay points of a trajectory plus their cluster labels."""

    staypoints: list[StayPoint]
    clusters: LabeledClusters

    @property
    def n_clusters(self) -> int:
        return self.clusters.n_clusters


def _centroids(staypoints: Sequence[StayPoint]) -> list[GeoPoint]:
    return [s.centroid for s in staypoints]


def sp_dbscan(
    t: Trajectory,
    delta_s: int = DEFAULT_DELTA_S,
    theta_m: float = DEFAULT_THETA_M,
    eps_m: float = DEFAULT_EPS_M,
    min_pts: int | None = None,
) -> PipelineResult:
    """Stay-point detection followed by DBSCAN on the centroids."""
    sps = detect_staypoints(t, delta_s=delta_s, theta_m=theta_m)
    if min_pts is None:
        min_pts = BaselineParams.from_count(len(sps)).min_pts
    return PipelineResult(staypoints=sps, clusters=dbscan(_centroids(sps), eps_m=eps_m, min_pts=min_pts))


def sp_optics(
    t: Trajectory,
    delta_s: int = DEFAULT_DELTA_S,
    theta_m: float = DEFAULT_THETA_M,
    min_pts: int | None = None,
    xi: float = DEFAULT_XI,
) -> PipelineResult:
    """Stay-point detection followed by OPTICS xi-extraction on the centroids."""
    sps = detect_staypoints(t, delta_s=delta_s, theta_m=theta_m)
    if min_pts is None:
        min_pts = BaselineParams.from_count(len(sps)).min_pts
    return PipelineResult(staypoints=sps, clusters=optics_clusters(_centroids(sps), min_pts=min_pts, xi=xi))


def sp_linkage(
    t: Trajectory,
    criterion: str,
    delta_s: int = DEFAULT_DELTA_S,
    theta_m: float = DEFAULT_THETA_M,
    cluster_cap: int | None = None,
) -> PipelineResult:
    """Stay-point detection followed by the criterion-optimized linkage cut."""
    sps = detect_staypoints(t, delta_s=delta_s, theta_m=theta_m)
    search = optimize_linkage(_centroids(sps), criterion=criterion, cluster_cap=cluster_cap)
    return PipelineResult(staypoints=sps, clusters=search.clusters)
