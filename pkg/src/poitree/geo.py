"""Spherical distances and the planar projection used by the clustering stages.

All distances are meters on a sphere of radius 6,371,000 m. The projection is
the equirectangular approximation about a reference origin; over the spans this
package targets (tens of kilometers) its error against the great-circle
distance stays below one percent, which is why every consumer except DBSCAN
and stay-point detection may work in the projected plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

EARTH_RADIUS_M = 6_371_000.0


class GeoPoint(NamedTuple):
    """A WGS-ish latitude/longitude pair in decimal degrees."""

    lat: float
    lon: float


class PlanarPoint(NamedTuple):
    """A point in the local projected plane, meters east (x) / north (y)."""

    x: float
    y: float


def haversine_m(a: GeoPoint | tuple[float, float], b: GeoPoint | tuple[float, float]) -> float:
    """Great-circle distance between two lat/lon points, in meters.

    Parameters
    ----------
    a, b : GeoPoint or (lat, lon) tuple
        Positions in decimal degrees.

    Returns
    -------
    float
        Spherical distance in meters, in [0, pi * R].
    """
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    # clamp against rounding so antipodal points cannot produce sqrt(>1)
    h = min(1.0, h)
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(h))


def haversine_pairwise_m(lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    """Full symmetric matrix of great-circle distances for coordinate arrays."""
    la = np.radians(np.asarray(lats, dtype=float))[:, None]
    lo = np.radians(np.asarray(lons, dtype=float))[:, None]
    dlat = la - la.T
    dlon = lo - lo.T
    h = np.sin(dlat / 2.0) ** 2 + np.cos(la) * np.cos(la.T) * np.sin(dlon / 2.0) ** 2
    np.clip(h, 0.0, 1.0, out=h)
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(h))


def project_equirectangular(
    points: Sequence[GeoPoint | tuple[float, float]],
    origin: GeoPoint | None = None,
) -> tuple[np.ndarray, GeoPoint]:
    """Project lat/lon points to a local planar frame in meters.

    x = R * (lon - lon0) * cos(lat0), y = R * (lat - lat0), angles in radians.
    The origin defaults to the arithmetic mean of the input coordinates, which
    keeps the small-angle error of the approximation centered on the data.

    Parameters
    ----------
    points : sequence of GeoPoint
        Input positions in decimal degrees. Must be non-empty.
    origin : GeoPoint, optional
        Reference point; computed as the coordinate mean when omitted.

    Returns
    -------
    (ndarray of shape (n, 2), GeoPoint)
        Projected x/y in meters and the origin that was used.
    """
    arr = np.asarray([(p[0], p[1]) for p in points], dtype=float)
    if arr.size == 0:
        raise ValueError("project_equirectangular requires at least one point")
    if origin is None:
        origin = GeoPoint(float(arr[:, 0].mean()), float(arr[:, 1].mean()))
    lat0 = math.radians(origin.lat)
    x = EARTH_RADIUS_M * np.radians(arr[:, 1] - origin.lon) * math.cos(lat0)
    y = EARTH_RADIUS_M * np.radians(arr[:, 0] - origin.lat)
    return np.column_stack([x, y]), origin


def unproject_equirectangular(xy: np.ndarray, origin: GeoPoint) -> np.ndarray:
    """Inverse of :func:`project_equirectangular`; returns (n, 2) lat/lon degrees."""
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    lat0 = math.radians(origin.lat)
    lat = origin.lat + np.degrees(xy[:, 1] / EARTH_RADIUS_M)
    lon = origin.lon + np.degrees(xy[:, 0] / (EARTH_RADIUS_M * math.cos(lat0)))
    return np.column_stack([lat, lon])


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise distances in condensed (upper-triangle) form.

    ``condensed[k]`` holds d(i, j) for i < j in the usual scipy ordering. The
    condensed layout is what the linkage and cut machinery consume; ``get``
    and ``full`` are conveniences for tests and small inputs.
    """

    condensed: np.ndarray
    n: int

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index out of range for {self.n} points")
        if i > j:
            i, j = j, i
        k = self.n * i - (i * (i + 1)) // 2 + (j - i - 1)
        return float(self.condensed[k])

    def full(self) -> np.ndarray:
        return squareform(self.condensed)


def pairwise_matrix(points: np.ndarray | Sequence[PlanarPoint]) -> DistanceMatrix:
    """Euclidean pairwise distances of planar points, condensed.

    Parameters
    ----------
    points : (n, 2) array or sequence of PlanarPoint
        Projected coordinates in meters.

    Returns
    -------
    DistanceMatrix
    """
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    n = arr.shape[0]
    if n < 2:
        return DistanceMatrix(condensed=np.empty(0, dtype=float), n=n)
    return DistanceMatrix(condensed=pdist(arr), n=n)
