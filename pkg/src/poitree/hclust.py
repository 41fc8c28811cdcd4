"""Complete-linkage dendrograms and exact-cardinality cuts.

The dendrogram is built once per point set; a cut at n clusters undoes the
last n-1 merges, so successive cuts form a nested hierarchy. Complete linkage
guarantees that every cluster's diameter is bounded by the height of the merge
that formed it, which is what lets a distance threshold be traded for a
cluster count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import linkage as _scipy_linkage

from .geo import DistanceMatrix


@dataclass(frozen=True)
class Dendrogram:
    """Merge history over leaf_count points.

    merges[k] = (left, right, height, size): node ids below leaf_count are
    leaves; merge k creates node leaf_count + k. Heights are non-decreasing
    in merge order.
    """

    merges: tuple[tuple[int, int, float, int], ...]
    leaf_count: int

    def parent_table(self) -> np.ndarray:
        """parent[node] = merge index consuming the node, or -1 for the root."""
        parent = np.full(self.leaf_count + len(self.merges), -1, dtype=np.int64)
        for k, (a, b, _, _) in enumerate(self.merges):
            parent[a] = k
            parent[b] = k
        return parent


@dataclass(frozen=True)
class ClusterAssignment:
    """Labels for each input point; labels run 0..n_clusters-1 with no gaps."""

    labels: np.ndarray
    n_clusters: int


def linkage_complete(dm: DistanceMatrix) -> Dendrogram:
    """Agglomerate with complete (maximum) linkage.

    Parameters
    ----------
    dm : DistanceMatrix
        Condensed pairwise distances over at least 2 points.

    Returns
    -------
    Dendrogram
    """
    if dm.n < 2:
        raise ValueError(f"linkage requires at least 2 points, got {dm.n}")
    z = _scipy_linkage(dm.condensed, method="complete")
    merges = tuple(
        (int(row[0]), int(row[1]), float(row[2]), int(row[3])) for row in z
    )
    return Dendrogram(merges=merges, leaf_count=dm.n)


def cut(dend: Dendrogram, n: int) -> ClusterAssignment:
    """Partition into exactly n clusters by undoing the last n-1 merges.

    Labels are assigned by ascending smallest leaf index, so the output is
    deterministic and independent of merge bookkeeping.

    Parameters
    ----------
    dend : Dendrogram
    n : int
        Target cluster count, 1 <= n <= leaf_count.

    Returns
    -------
    ClusterAssignment
    """
    leaf_count = dend.leaf_count
    if not 1 <= n <= leaf_count:
        raise ValueError(f"cut cardinality {n} outside [1, {leaf_count}]")

    parent = np.arange(leaf_count, dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    # apply the first leaf_count - n merges; node id -> representative leaf
    rep = list(range(leaf_count))
    for k in range(leaf_count - n):
        a, b, _, _ = dend.merges[k]
        ra, rb = find(rep[a]), find(rep[b])
        parent[rb] = ra
        rep.append(ra)

    roots = np.array([find(i) for i in range(leaf_count)], dtype=np.int64)
    # canonical labels: order clusters by their smallest member index
    order: dict[int, int] = {}
    for i, r in enumerate(roots):
        if r not in order:
            order[r] = len(order)
    labels = np.array([order[r] for r in roots], dtype=np.int64)
    return ClusterAssignment(labels=labels, n_clusters=len(order))


def cluster_members(assignment: ClusterAssignment) -> list[np.ndarray]:
    """Member index arrays per cluster label, label-ordered."""
    return [np.flatnonzero(assignment.labels == c) for c in range(assignment.n_clusters)]
