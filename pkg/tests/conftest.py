"""Shared fixtures, hypothesis configuration, and tiny trajectory builders."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from poitree import Fix, GeoPoint, Trajectory

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=100,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("ci")

SECONDS_PER_DAY = 86400
#: roughly 2023-11-15 00:00 UTC, a Wednesday; keeps synthetic days aligned
BASE_EPOCH = 1_700_006_400
#: degrees of latitude per meter
DEG_PER_M_LAT = 1.0 / 111_194.92664455873
ORIGIN = GeoPoint(46.52, 6.63)


def offset_point(east_m: float, north_m: float, origin: GeoPoint = ORIGIN) -> tuple[float, float]:
    """Lat/lon displaced from the origin by meters east and north."""
    lat = origin.lat + north_m * DEG_PER_M_LAT
    lon = origin.lon + east_m * DEG_PER_M_LAT / math.cos(math.radians(origin.lat))
    return lat, lon


def make_processed(
    entries: list[tuple[int, float, float, float]],
    user_id: str = "test",
    day_offset_min: int = 0,
    segment_breaks: frozenset[int] = frozenset(),
) -> Trajectory:
    """Processed trajectory from (timestamp, east_m, north_m, duration_s) rows."""
    fixes = []
    for ts, east, north, duration in entries:
        lat, lon = offset_point(east, north)
        fixes.append(Fix(timestamp=ts, lat=lat, lon=lon, accuracy=10.0, duration=duration))
    return Trajectory(
        user_id=user_id,
        fixes=tuple(fixes),
        day_offset_min=day_offset_min,
        segment_breaks=segment_breaks,
        processed=True,
    )


def make_raw(
    entries: list[tuple[int, float, float]],
    accuracy: float = 10.0,
    user_id: str = "test",
) -> Trajectory:
    """Unprocessed trajectory from (timestamp, east_m, north_m) rows."""
    fixes = []
    for ts, east, north in entries:
        lat, lon = offset_point(east, north)
        fixes.append(Fix(timestamp=ts, lat=lat, lon=lon, accuracy=accuracy))
    return Trajectory(user_id=user_id, fixes=tuple(fixes), processed=False)


def schedule_trajectory(
    seed: int,
    n_days: int = 8,
    n_places: int = 4,
    sigma_m: float = 8.0,
    max_fixes: int = 300,
) -> Trajectory:
    """Small clustered trajectory with day structure for score-oracle tests.

    Each day visits a random subset of well-separated places for a random
    number of 10-minute fixes; noise keeps coordinates distinct.
    """
    rng = np.random.default_rng(seed)
    centers = [(float(rng.uniform(-2000, 2000)), float(rng.uniform(-2000, 2000))) for _ in range(n_places)]
    entries: list[tuple[int, float, float, float]] = []
    for day in range(n_days):
        t = BASE_EPOCH + day * SECONDS_PER_DAY + 8 * 3600
        visited = rng.permutation(n_places)[: int(rng.integers(1, n_places + 1))]
        for place in visited:
            for _ in range(int(rng.integers(1, 7))):
                east = centers[place][0] + float(rng.normal(0, sigma_m))
                north = centers[place][1] + float(rng.normal(0, sigma_m))
                entries.append((t, east, north, 600.0))
                t += 600
            t += 3600
    entries = entries[:max_fixes]
    return make_processed(entries, user_id=f"sched-{seed}")


@pytest.fixture(scope="session")
def rng_pool():
    """Deterministic generator factory for tests that need many draws."""
    def make(seed: int) -> np.random.Generator:
        return np.random.default_rng(seed)

    return make
