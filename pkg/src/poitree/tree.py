"""Place-of-interest tree: types, temporal statistics, and serialization.

A place of interest (POI) is a cluster of fixes that the user visits often
enough (visit-day fraction) and long enough (dwell per visit day). POIs form a
two-tier tree: global POIs partition the significant fixes coarsely, and each
global POI may contain local child POIs found by re-clustering its members
under laxer thresholds; clusters that fail the global bar but clear the local
one become parentless local POIs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .geo import GeoPoint


@dataclass(frozen=True)
class TemporalStats:
    """Visit regularity and dwell intensity of a fix subset.

    f_vd is visit days over observation days; d_vd is total dwell in minutes
    per visit day.
    """

    f_vd: float
    d_vd: float
    visit_days: int
    observation_days: int
    total_duration_min: float


@dataclass(frozen=True)
class PoiThresholds:
    """Qualification bar for one tier: minimum f_vd and minimum d_vd (minutes)."""

    f_vd_min: float
    d_vd_min: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f_vd_min <= 1.0:
            raise ValueError(f"f_vd_min must be in [0, 1], got {self.f_vd_min}")
        if self.d_vd_min < 0:
            raise ValueError(f"d_vd_min must be >= 0, got {self.d_vd_min}")

    def admits(self, stats: TemporalStats) -> bool:
        return stats.f_vd >= self.f_vd_min and stats.d_vd >= self.d_vd_min


#: default qualification bars: a global POI is visited most days for hours,
#: a local POI roughly weekly for at least half an hour
GLOBAL_THRESHOLDS = PoiThresholds(f_vd_min=0.63, d_vd_min=120.0)
LOCAL_THRESHOLDS = PoiThresholds(f_vd_min=0.13, d_vd_min=30.0)

TIER_GLOBAL = "global"
TIER_LOCAL = "local"


@dataclass(frozen=True)
class Poi:
    """One extracted place of interest."""

    id: str
    tier: str
    parent: str | None
    centroid: GeoPoint
    member_indices: tuple[int, ...]
    stats: TemporalStats

    def __post_init__(self) -> None:
        if self.tier not in (TIER_GLOBAL, TIER_LOCAL):
            raise ValueError(f"unknown tier {self.tier!r}")
        if self.tier == TIER_GLOBAL and self.parent is not None:
            raise ValueError("global POIs cannot have a parent")


@dataclass(frozen=True)
class OptimizationTrace:
    """Record of one cut-scan: score per evaluated n and why the scan stopped."""

    scores: dict[int, int]
    best_n: int
    best_score: int
    termination_reason: str


@dataclass(frozen=True)
class PoiTree:
    """The two-tier POI hierarchy extracted from one trajectory."""

    user_id: str
    pois: tuple[Poi, ...]
    global_trace: OptimizationTrace | None = None

    def __iter__(self) -> Iterator[Poi]:
        return iter(self.pois)

    def __len__(self) -> int:
        return len(self.pois)

    @property
    def global_pois(self) -> tuple[Poi, ...]:
        return tuple(p for p in self.pois if p.tier == TIER_GLOBAL)

    @property
    def local_pois(self) -> tuple[Poi, ...]:
        return tuple(p for p in self.pois if p.tier == TIER_LOCAL)

    @property
    def orphan_local_pois(self) -> tuple[Poi, ...]:
        return tuple(p for p in self.pois if p.tier == TIER_LOCAL and p.parent is None)

    def children_of(self, poi_id: str) -> tuple[Poi, ...]:
        return tuple(p for p in self.pois if p.parent == poi_id)

    def get(self, poi_id: str) -> Poi:
        for p in self.pois:
            if p.id == poi_id:
                return p
        raise KeyError(poi_id)

    def place_count(self) -> int:
        """Finest-granularity place count: local POIs plus childless globals."""
        with_children = {p.parent for p in self.pois if p.parent is not None}
        n_local = len(self.local_pois)
        n_leaf_globals = sum(1 for p in self.global_pois if p.id not in with_children)
        return n_local + n_leaf_globals


# ---------------------------------------------------------------------------
# serialization

FORMAT_NAME = "poi-tree"
FORMAT_VERSION = 1


def _stats_to_dict(s: TemporalStats) -> dict:
    return {
        "f_vd": s.f_vd,
        "d_vd": s.d_vd,
        "visit_days": s.visit_days,
        "observation_days": s.observation_days,
        "total_duration_min": s.total_duration_min,
    }


def _stats_from_dict(d: dict) -> TemporalStats:
    return TemporalStats(
        f_vd=float(d["f_vd"]),
        d_vd=float(d["d_vd"]),
        visit_days=int(d["visit_days"]),
        observation_days=int(d["observation_days"]),
        total_duration_min=float(d["total_duration_min"]),
    )


def tree_to_dict(tree: PoiTree) -> dict:
    """Versioned JSON-ready representation of a PoiTree."""
    doc: dict = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "user_id": tree.user_id,
        "pois": [
            {
                "id": p.id,
                "tier": p.tier,
                "parent": p.parent,
                "centroid": {"lat": p.centroid.lat, "lon": p.centroid.lon},
                "member_indices": list(p.member_indices),
                "stats": _stats_to_dict(p.stats),
            }
            for p in tree.pois
        ],
    }
    if tree.global_trace is not None:
        tr = tree.global_trace
        doc["global_trace"] = {
            "scores": {str(k): v for k, v in tr.scores.items()},
            "best_n": tr.best_n,
            "best_score": tr.best_score,
            "termination_reason": tr.termination_reason,
        }
    return doc


def tree_from_dict(doc: dict) -> PoiTree:
    """Parse a dict produced by :func:`tree_to_dict`, validating the envelope."""
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} document: format={doc.get('format')!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported {FORMAT_NAME} version {doc.get('version')!r}")
    pois = tuple(
        Poi(
            id=str(d["id"]),
            tier=str(d["tier"]),
            parent=(None if d.get("parent") is None else str(d["parent"])),
            centroid=GeoPoint(float(d["centroid"]["lat"]), float(d["centroid"]["lon"])),
            member_indices=tuple(int(i) for i in d["member_indices"]),
            stats=_stats_from_dict(d["stats"]),
        )
        for d in doc["pois"]
    )
    trace = None
    if "global_trace" in doc:
        tr = doc["global_trace"]
        trace = OptimizationTrace(
            scores={int(k): int(v) for k, v in tr["scores"].items()},
            best_n=int(tr["best_n"]),
            best_score=int(tr["best_score"]),
            termination_reason=str(tr["termination_reason"]),
        )
    return PoiTree(user_id=str(doc.get("user_id", "")), pois=pois, global_trace=trace)


def tree_to_json(tree: PoiTree, indent: int | None = 2) -> str:
    return json.dumps(tree_to_dict(tree), indent=indent)


def tree_from_json(text: str) -> PoiTree:
    return tree_from_dict(json.loads(text))


def tree_to_geojson(tree: PoiTree) -> dict:
    """GeoJSON FeatureCollection with one Point feature per POI."""
    features = []
    for p in tree.pois:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [p.centroid.lon, p.centroid.lat]},
                "properties": {
                    "id": p.id,
                    "tier": p.tier,
                    "parent": p.parent,
                    "f_vd": p.stats.f_vd,
                    "d_vd": p.stats.d_vd,
                    "visit_days": p.stats.visit_days,
                    "fix_count": len(p.member_indices),
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
