"""Two-tier POI extraction by maximizing a temporal-constraint score over cuts.

The score of a partition is the number of clusters whose members are visited
on a large enough fraction of observation days (f_vd) and dwell long enough
per visit day (d_vd). The extractor scans dendrogram cuts n = 2, 3, ... and
keeps the smallest n attaining the maximum score; the scan stops early when
the score hits zero after having been positive, fails to improve for a run of
cuts, or falls far below the best seen. Qualifying clusters at the best cut
become global POIs, their members are re-clustered the same way under local
thresholds to form children, and non-qualifying clusters that still clear the
local bar become parentless local POIs.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .geo import GeoPoint, pairwise_matrix, project_equirectangular
from .hclust import ClusterAssignment, Dendrogram, cluster_members, cut, linkage_complete
from .tree import (
    GLOBAL_THRESHOLDS,
    LOCAL_THRESHOLDS,
    OptimizationTrace,
    Poi,
    PoiThresholds,
    PoiTree,
    TemporalStats,
    TIER_GLOBAL,
    TIER_LOCAL,
)
from .trajectory import Trajectory, day_index

#: scan stops after this many consecutive cuts without a new maximum
STAGNATION_LIMIT = 50
#: scan stops once the score falls this far below the best seen
DROP_MARGIN = 10

REASON_EXHAUSTED = "exhausted"
REASON_ZERO = "zero_score"
REASON_STAGNATION = "stagnation_50"
REASON_DROP = "drop_by_10"


def temporal_stats(t: Trajectory, member_indices: Sequence[int]) -> TemporalStats:
    """Visit-day fraction and dwell-per-visit-day of a subset of fixes.

    Parameters
    ----------
    t : Trajectory
        Processed trajectory the indices refer to.
    member_indices : sequence of int
        Non-empty fix indices.

    Returns
    -------
    TemporalStats
        f_vd = visit_days / observation_days (observation days of the whole
        trajectory), d_vd = total dwell minutes / visit_days.
    """
    if len(member_indices) == 0:
        raise ValueError("temporal_stats requires at least one member fix")
    fixes = t.fixes
    days = {day_index(fixes[i].timestamp, t.day_offset_min) for i in member_indices}
    visit_days = len(days)
    observation_days = t.observation_days
    total_min = sum(fixes[i].duration for i in member_indices) / 60.0
    return TemporalStats(
        f_vd=visit_days / observation_days,
        d_vd=total_min / visit_days,
        visit_days=visit_days,
        observation_days=observation_days,
        total_duration_min=total_min,
    )


def poi_score(t: Trajectory, assignment: ClusterAssignment, thresholds: PoiThresholds) -> int:
    """Number of clusters in the partition that satisfy both thresholds."""
    score = 0
    for members in cluster_members(assignment):
        if thresholds.admits(temporal_stats(t, members)):
            score += 1
    return score


def _scan_scores(
    score_of_n: Callable[[int], int],
    n_max: int,
    stagnation_limit: int = STAGNATION_LIMIT,
    drop_margin: int = DROP_MARGIN,
) -> OptimizationTrace:
    """Evaluate scores at n = 2..n_max with the early-termination rules.

    Termination conditions are checked in order after each evaluation:
    exhausted (n reached n_max), zero_score (score 0 after a nonzero score),
    stagnation (stagnation_limit consecutive n without a new maximum), and
    drop (score <= best - drop_margin). best_n is the smallest n attaining
    the maximum recorded score.
    """
    scores: dict[int, int] = {}
    best = -1
    best_n = 2
    since_improve = 0
    seen_nonzero = False
    reason = REASON_EXHAUSTED
    for n in range(2, n_max + 1):
        s = int(score_of_n(n))
        scores[n] = s
        if s > best:
            best, best_n, since_improve = s, n, 0
        else:
            since_improve += 1
        if n == n_max:
            reason = REASON_EXHAUSTED
            break
        if s == 0 and seen_nonzero:
            reason = REASON_ZERO
            break
        if since_improve >= stagnation_limit:
            reason = REASON_STAGNATION
            break
        if s <= best - drop_margin:
            reason = REASON_DROP
            break
        if s > 0:
            seen_nonzero = True
    return OptimizationTrace(scores=scores, best_n=best_n, best_score=best, termination_reason=reason)


def _node_aggregates(
    t: Trajectory,
    dend: Dendrogram,
    thresholds: PoiThresholds,
    members: Sequence[int] | None,
) -> list[bool]:
    """Per-dendrogram-node qualification flags from bottom-up aggregates.

    Dwell seconds add up; visit days combine as bitmask OR over the calendar
    days of the whole trajectory. Both routes (this one and per-cluster
    enumeration via :func:`temporal_stats`) divide the same integer-exact
    sums, so their qualification decisions are identical.
    """
    fixes = t.fixes
    leaf_count = dend.leaf_count
    if members is None:
        members = range(leaf_count)
    day_offset = t.day_offset_min
    all_days = [day_index(f.timestamp, day_offset) for f in fixes]
    day_min = min(all_days)
    observation_days = t.observation_days

    n_nodes = leaf_count + len(dend.merges)
    dur = [0.0] * n_nodes
    day_bits = [0] * n_nodes
    for k, fix_idx in enumerate(members):
        dur[k] = fixes[fix_idx].duration
        day_bits[k] = 1 << (all_days[fix_idx] - day_min)
    for m, (a, b, _, _) in enumerate(dend.merges):
        node = leaf_count + m
        dur[node] = dur[a] + dur[b]
        day_bits[node] = day_bits[a] | day_bits[b]

    qualifies = [False] * n_nodes
    for node in range(n_nodes):
        visit_days = day_bits[node].bit_count()
        f_vd = visit_days / observation_days
        d_vd = (dur[node] / 60.0) / visit_days
        qualifies[node] = f_vd >= thresholds.f_vd_min and d_vd >= thresholds.d_vd_min
    return qualifies


def find_optimal_cut(
    t: Trajectory,
    dend: Dendrogram,
    thresholds: PoiThresholds,
    *,
    members: Sequence[int] | None = None,
    stagnation_limit: int = STAGNATION_LIMIT,
    drop_margin: int = DROP_MARGIN,
) -> OptimizationTrace:
    """Scan cuts of the dendrogram for the score-maximizing cluster count.

    Parameters
    ----------
    t : Trajectory
        Processed trajectory providing timestamps and durations.
    dend : Dendrogram
        Hierarchy over the trajectory's fixes, or over a subset of them.
    thresholds : PoiThresholds
        Qualification bar applied to every cluster of every cut.
    members : sequence of int, optional
        When the dendrogram covers a subset, members[k] is the fix index of
        leaf k. Defaults to the identity mapping.
    stagnation_limit, drop_margin : int
        Early-termination tuning; defaults match the extractor's contract.

    Returns
    -------
    OptimizationTrace
        Scores per evaluated n, the smallest best n, and the stop reason.
        A dendrogram with fewer than 2 leaves yields the degenerate trace
        (best_n = 1, no scores).
    """
    leaf_count = dend.leaf_count
    if leaf_count < 2:
        return OptimizationTrace(scores={}, best_n=1, best_score=0, termination_reason=REASON_EXHAUSTED)

    q = _node_aggregates(t, dend, thresholds, members)

    # walk n upward, splitting one node per step; score updates in O(1)
    root_merge = len(dend.merges) - 1
    a, b, _, _ = dend.merges[root_merge]
    score = int(q[a]) + int(q[b])
    state = {"score": score, "next_merge": root_merge - 1}

    def score_of_n(n: int) -> int:
        current = state["score"]
        m = state["next_merge"]
        if m >= 0:
            node = leaf_count + m
            na, nb, _, _ = dend.merges[m]
            state["score"] = current - int(q[node]) + int(q[na]) + int(q[nb])
            state["next_merge"] = m - 1
        return current

    return _scan_scores(score_of_n, leaf_count, stagnation_limit, drop_margin)


def _centroid(t: Trajectory, member_indices: Sequence[int]) -> GeoPoint:
    lat = sum(t.fixes[i].lat for i in member_indices) / len(member_indices)
    lon = sum(t.fixes[i].lon for i in member_indices) / len(member_indices)
    return GeoPoint(lat, lon)


def extract_pois(
    t: Trajectory,
    global_thresholds: PoiThresholds = GLOBAL_THRESHOLDS,
    local_thresholds: PoiThresholds = LOCAL_THRESHOLDS,
) -> PoiTree:
    """Extract the two-tier POI tree from a processed trajectory.

    Steps: build a complete-linkage dendrogram over the projected fixes, scan
    cuts for the score-maximizing cluster count under the global thresholds,
    then at that cut turn qualifying clusters into global POIs and check the
    rest against the local thresholds (parentless local POIs, kept whole).
    Each global POI's members are re-clustered with the identical procedure
    under the local thresholds; qualifying sub-clusters become its children.

    Parameters
    ----------
    t : Trajectory
        Processed, with at least 2 fixes.
    global_thresholds, local_thresholds : PoiThresholds

    Returns
    -------
    PoiTree
        May be empty if no cluster ever qualifies. Carries the global-tier
        OptimizationTrace for auditing.
    """
    if not t.processed:
        raise ValueError("extract_pois requires a processed trajectory")
    if len(t.fixes) < 2:
        raise ValueError(f"extract_pois requires at least 2 fixes, got {len(t.fixes)}")

    points = [f.point for f in t.fixes]
    planar, _origin = project_equirectangular(points)
    dend = linkage_complete(pairwise_matrix(planar))
    gtrace = find_optimal_cut(t, dend, global_thresholds)
    assignment = cut(dend, gtrace.best_n)

    global_members: list[np.ndarray] = []
    orphan_members: list[np.ndarray] = []
    for mem in cluster_members(assignment):
        stats = temporal_stats(t, mem)
        if global_thresholds.admits(stats):
            global_members.append(mem)
        elif local_thresholds.admits(stats):
            orphan_members.append(mem)

    pois: list[Poi] = []
    children: list[Poi] = []
    local_serial = 0
    for g_idx, mem in enumerate(global_members):
        gid = f"g{g_idx}"
        pois.append(
            Poi(
                id=gid,
                tier=TIER_GLOBAL,
                parent=None,
                centroid=_centroid(t, mem),
                member_indices=tuple(int(i) for i in mem),
                stats=temporal_stats(t, mem),
            )
        )
        children.extend(_extract_children(t, planar, mem, gid, local_thresholds, local_serial))
        local_serial = len(children)

    orphans: list[Poi] = []
    for mem in orphan_members:
        orphans.append(
            Poi(
                id=f"l{local_serial}",
                tier=TIER_LOCAL,
                parent=None,
                centroid=_centroid(t, mem),
                member_indices=tuple(int(i) for i in mem),
                stats=temporal_stats(t, mem),
            )
        )
        local_serial += 1

    return PoiTree(user_id=t.user_id, pois=tuple(pois + children + orphans), global_trace=gtrace)


def _extract_children(
    t: Trajectory,
    planar: np.ndarray,
    parent_members: np.ndarray,
    parent_id: str,
    local_thresholds: PoiThresholds,
    id_start: int,
) -> list[Poi]:
    """Re-cluster a global POI's members under the local thresholds."""
    if len(parent_members) < 2:
        return []
    sub_dm = pairwise_matrix(planar[parent_members])
    if not np.any(sub_dm.condensed > 0.0):
        return []  # fewer than 2 distinct coordinates
    sub_dend = linkage_complete(sub_dm)
    strace = find_optimal_cut(t, sub_dend, local_thresholds, members=parent_members)
    sub_assignment = cut(sub_dend, strace.best_n)
    out: list[Poi] = []
    serial = id_start
    for sub in cluster_members(sub_assignment):
        mem = parent_members[sub]
        stats = temporal_stats(t, mem)
        if local_thresholds.admits(stats):
            out.append(
                Poi(
                    id=f"l{serial}",
                    tier=TIER_LOCAL,
                    parent=parent_id,
                    centroid=_centroid(t, mem),
                    member_indices=tuple(int(i) for i in mem),
                    stats=stats,
                )
            )
            serial += 1
    return out
