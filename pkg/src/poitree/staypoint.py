"""Stay-point detection on processed trajectories.

A stay point is a maximal window of consecutive fixes that all lie within a
distance threshold of the window's first fix (the anchor) and that together
represent at least a minimum dwell. Windows never extend across a segment
break, so a stay cannot silently bridge a hole in the recording; the dwell of
a window includes the final member's own attributed duration, so a single
long-dwell fix can form a stay point on its own.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geo import GeoPoint, haversine_m
from .trajectory import Trajectory

#: minimum dwell, seconds
DEFAULT_DELTA_S = 1800
#: anchor distance threshold, meters
DEFAULT_THETA_M = 50.0


@dataclass(frozen=True)
class StayPoint:
    """A detected stay: centroid of its member fixes plus the visit interval."""

    centroid: GeoPoint
    arrival: int
    departure: int
    first_index: int
    last_index: int

    @property
    def fix_count(self) -> int:
        return self.last_index - self.first_index + 1


def detect_staypoints(
    t: Trajectory,
    delta_s: int = DEFAULT_DELTA_S,
    theta_m: float = DEFAULT_THETA_M,
) -> list[StayPoint]:
    """Extract stay points from a processed trajectory.

    The scan anchors at fix i and extends j while fix j stays within theta_m
    of the anchor and no segment break lies in (i, j]. When extension stops,
    the window [i, j) becomes a stay point iff

        timestamp[j-1] - timestamp[i] + duration[j-1] >= delta_s

    and the scan restarts at j either way.

    Parameters
    ----------
    t : Trajectory
        Must be processed (durations and segment breaks assigned).
    delta_s : int
        Minimum dwell in seconds.
    theta_m : float
        Anchor distance threshold in meters.

    Returns
    -------
    list of StayPoint, ordered by arrival time.
    """
    if not t.processed:
        raise ValueError("detect_staypoints requires a processed trajectory")
    if delta_s <= 0 or theta_m <= 0:
        raise ValueError("delta_s and theta_m must be positive")

    fixes = t.fixes
    n = len(fixes)
    out: list[StayPoint] = []
    i = 0
    while i < n:
        anchor = fixes[i].point
        j = i + 1
        while j < n and j not in t.segment_breaks and haversine_m(anchor, fixes[j].point) <= theta_m:
            j += 1
        last = fixes[j - 1]
        dwell = last.timestamp - fixes[i].timestamp + last.duration
        if dwell >= delta_s:
            members = fixes[i:j]
            lat = sum(f.lat for f in members) / len(members)
            lon = sum(f.lon for f in members) / len(members)
            out.append(
                StayPoint(
                    centroid=GeoPoint(lat, lon),
                    arrival=fixes[i].timestamp,
                    departure=int(last.timestamp + last.duration),
                    first_index=i,
                    last_index=j - 1,
                )
            )
        i = j
    return out
