"""Scikit-learn style facades over the functional extraction pipelines.

Each estimator holds its tuning knobs as constructor arguments (so
``get_params`` / ``set_params`` / ``clone`` work), validates its input, fits
from a single preprocessed :class:`~poitree.trajectory.Trajectory`, and
exposes its results as trailing-underscore attributes. Accessing results
before ``fit`` raises :class:`~sklearn.exceptions.NotFittedError`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .baselines import (
    DEFAULT_EPS_M,
    DEFAULT_XI,
    sp_dbscan,
    sp_linkage,
    sp_optics,
)
from .extraction import extract_pois
from .staypoint import DEFAULT_DELTA_S, DEFAULT_THETA_M
from .tree import (
    GLOBAL_THRESHOLDS,
    LOCAL_THRESHOLDS,
    PoiThresholds,
    PoiTree,
)
from .trajectory import Trajectory
from .validation import check_trajectory


def _check_is_fitted(estimator: BaseEstimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call fit() first."
        )


class PoiTreeExtractor(BaseEstimator):
    """Two-tier place extraction by score-optimized dendrogram cuts.

    Parameters
    ----------
    f_vd_global, d_vd_global : float
        Visit-day frequency and dwell-rate (minutes per visit day) bars a
        cluster must clear to count as a top-tier place.
    f_vd_local, d_vd_local : float
        The same bars for the sub-places extracted inside each top-tier place.

    Attributes
    ----------
    tree_ : PoiTree
    labels_ : ndarray of shape (n_fixes,)
        Top-tier place index per fix, -1 for unassigned fixes.
    n_global_, n_local_ : int
    """

    def __init__(
        self,
        f_vd_global: float = GLOBAL_THRESHOLDS.f_vd_min,
        d_vd_global: float = GLOBAL_THRESHOLDS.d_vd_min,
        f_vd_local: float = LOCAL_THRESHOLDS.f_vd_min,
        d_vd_local: float = LOCAL_THRESHOLDS.d_vd_min,
    ) -> None:
        self.f_vd_global = f_vd_global
        self.d_vd_global = d_vd_global
        self.f_vd_local = f_vd_local
        self.d_vd_local = d_vd_local

    def fit(self, X: Trajectory, y: object = None) -> "PoiTreeExtractor":
        X = check_trajectory(X, require_processed=True, min_fixes=2)
        tree = extract_pois(
            X,
            global_thresholds=PoiThresholds(self.f_vd_global, self.d_vd_global),
            local_thresholds=PoiThresholds(self.f_vd_local, self.d_vd_local),
        )
        labels = np.full(len(X), -1, dtype=np.int64)
        for gi, poi in enumerate(tree.global_pois):
            labels[list(poi.member_indices)] = gi
        self.tree_ = tree
        self.labels_ = labels
        self.n_global_ = len(tree.global_pois)
        self.n_local_ = len(tree.local_pois)
        return self

    def fit_predict(self, X: Trajectory, y: object = None) -> np.ndarray:
        return self.fit(X).labels_

    def poi_tree(self) -> PoiTree:
        _check_is_fitted(self, "tree_")
        return self.tree_


class _StayPointClusterer(BaseEstimator):
    """Shared plumbing: fit stores staypoints_, labels_, n_clusters_."""

    def _fit_pipeline(self, X: Trajectory):  # pragma: no cover - overridden
        raise NotImplementedError

    def fit(self, X: Trajectory, y: object = None):
        X = check_trajectory(X, require_processed=True)
        result = self._fit_pipeline(X)
        self.staypoints_ = result.staypoints
        self.labels_ = result.clusters.labels
        self.n_clusters_ = result.clusters.n_clusters
        return self

    def fit_predict(self, X: Trajectory, y: object = None) -> np.ndarray:
        return self.fit(X).labels_


class StayPointDbscan(_StayPointClusterer):
    """Stay-point detection followed by density clustering of the centroids."""

    def __init__(
        self,
        delta_s: int = DEFAULT_DELTA_S,
        theta_m: float = DEFAULT_THETA_M,
        eps_m: float = DEFAULT_EPS_M,
        min_pts: int | None = None,
    ) -> None:
        self.delta_s = delta_s
        self.theta_m = theta_m
        self.eps_m = eps_m
        self.min_pts = min_pts

    def _fit_pipeline(self, X: Trajectory):
        return sp_dbscan(
            X, delta_s=self.delta_s, theta_m=self.theta_m, eps_m=self.eps_m, min_pts=self.min_pts
        )


class StayPointOptics(_StayPointClusterer):
    """Stay-point detection followed by reachability-based clustering."""

    def __init__(
        self,
        delta_s: int = DEFAULT_DELTA_S,
        theta_m: float = DEFAULT_THETA_M,
        min_pts: int | None = None,
        xi: float = DEFAULT_XI,
    ) -> None:
        self.delta_s = delta_s
        self.theta_m = theta_m
        self.min_pts = min_pts
        self.xi = xi

    def _fit_pipeline(self, X: Trajectory):
        return sp_optics(X, delta_s=self.delta_s, theta_m=self.theta_m, min_pts=self.min_pts, xi=self.xi)


class StayPointLinkage(_StayPointClusterer):
    """Stay-point detection followed by an internal-index-optimized linkage cut.

    criterion "db" minimizes the Davies-Bouldin index, "sc" maximizes the
    silhouette coefficient.
    """

    def __init__(
        self,
        criterion: str = "db",
        delta_s: int = DEFAULT_DELTA_S,
        theta_m: float = DEFAULT_THETA_M,
        cluster_cap: int | None = None,
    ) -> None:
        self.criterion = criterion
        self.delta_s = delta_s
        self.theta_m = theta_m
        self.cluster_cap = cluster_cap

    def _fit_pipeline(self, X: Trajectory):
        return sp_linkage(
            X,
            criterion=self.criterion,
            delta_s=self.delta_s,
            theta_m=self.theta_m,
            cluster_cap=self.cluster_cap,
        )
