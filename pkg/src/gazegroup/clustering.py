"""Agglomerative hierarchical clustering with a deterministic tie-break.

Supports single, complete, and average linkage via Lance-Williams updates
driven by a lazily-invalidated priority queue, which keeps the whole merge
sequence at O(N^2 log N).

Determinism: when several candidate pairs share the minimum distance, the
pair whose smaller member leaf index is least wins (then the smaller of
the two remaining member indices). In the merge record and the leaf walk,
the child subtree containing the smaller minimum leaf index comes first,
so leaf orders and golden outputs are reproducible bit for bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .similarity import CorrelationMatrix, DistanceMatrix

LINKAGES = ("single", "complete", "average")


@dataclass(frozen=True)
class Merge:
    left: int  # cluster id whose subtree holds the smaller min leaf index
    right: int
    height: float
    size: int  # member count of the new cluster


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree over p leaves; cluster ids follow the linkage-matrix
    convention (leaves 0..p-1, merge i creates cluster p+i)."""

    merges: tuple[Merge, ...]
    leaf_count: int
    linkage: str
    leaf_ids: tuple[str, ...]  # entity id per leaf index

    def to_linkage_rows(self) -> list[list[float]]:
        """p-1 rows of [left id, right id, height, member count]."""
        return [[m.left, m.right, m.height, m.size] for m in self.merges]


def agglomerate(dm: DistanceMatrix, linkage: str = "average") -> Dendrogram:
    if linkage not in LINKAGES:
        raise ValueError(f"linkage must be one of {LINKAGES}, got {linkage!r}")
    d = np.asarray(dm.values, dtype=float)
    p = d.shape[0]
    if d.shape != (p, p):
        raise ValueError("distance matrix must be square")
    if p < 2:
        raise ValueError("clustering needs at least 2 entities")

    # Per-cluster state, keyed by cluster id.
    size = {i: 1 for i in range(p)}
    min_leaf = {i: i for i in range(p)}
    alive = set(range(p))
    dist: dict[tuple[int, int], float] = {}
    heap: list[tuple[float, int, int, int, int]] = []
    for i in range(p):
        for j in range(i + 1, p):
            dist[(i, j)] = d[i, j]
            heap.append((d[i, j], i, j, i, j))
    heapq.heapify(heap)

    merges: list[Merge] = []
    next_id = p
    while len(alive) > 1:
        # Pop until a live, current entry surfaces.
        while True:
            height, tb1, tb2, a, b = heapq.heappop(heap)
            key = (a, b) if a < b else (b, a)
            if a in alive and b in alive and dist.get(key) == height:
                break
        alive.discard(a)
        alive.discard(b)
        new_id = next_id
        next_id += 1
        # Deterministic child order: smaller min leaf index on the left.
        left, right = (a, b) if min_leaf[a] <= min_leaf[b] else (b, a)
        merges.append(Merge(left, right, height, size[a] + size[b]))
        size[new_id] = size[a] + size[b]
        min_leaf[new_id] = min(min_leaf[a], min_leaf[b])
        for other in alive:
            da = dist.pop((min(a, other), max(a, other)))
            db = dist.pop((min(b, other), max(b, other)))
            if linkage == "single":
                dn = min(da, db)
            elif linkage == "complete":
                dn = max(da, db)
            else:
                dn = (size[a] * da + size[b] * db) / (size[a] + size[b])
            key = (min(new_id, other), max(new_id, other))
            dist[key] = dn
            lo = min(min_leaf[new_id], min_leaf[other])
            hi = max(min_leaf[new_id], min_leaf[other])
            heapq.heappush(heap, (dn, lo, hi, new_id, other))
        alive.add(new_id)

    return Dendrogram(tuple(merges), p, linkage, dm.entity_order)


def cut(dendrogram: Dendrogram, k: int) -> np.ndarray:
    """Labels for a cut into k clusters: undo the last k-1 merges.

    Returns one label per leaf index; labels are 0..k-1 in order of first
    appearance along the dendrogram leaf order, so successive cuts nest.
    """
    p = dendrogram.leaf_count
    if not 1 <= k <= p:
        raise ValueError(f"k must be in [1, {p}], got {k}")
    parent = list(range(p + len(dendrogram.merges)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for idx, m in enumerate(dendrogram.merges[: p - k]):
        new_id = p + idx
        parent[find(m.left)] = new_id
        parent[find(m.right)] = new_id

    labels = np.empty(p, dtype=int)
    relabel: dict[int, int] = {}
    for leaf in leaf_order(dendrogram):
        root = find(leaf)
        if root not in relabel:
            relabel[root] = len(relabel)
        labels[leaf] = relabel[root]
    return labels


def leaf_order(dendrogram: Dendrogram) -> tuple[int, ...]:
    """Left-to-right leaf sequence under the deterministic child ordering."""
    p = dendrogram.leaf_count
    children = {p + i: (m.left, m.right) for i, m in enumerate(dendrogram.merges)}
    root = p + len(dendrogram.merges) - 1
    order: list[int] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node < p:
            order.append(node)
        else:
            left, right = children[node]
            stack.append(right)
            stack.append(left)
    return tuple(order)


def ordered_entities(dendrogram: Dendrogram) -> tuple[str, ...]:
    return tuple(dendrogram.leaf_ids[i] for i in leaf_order(dendrogram))


def cluster_metrics(corr: CorrelationMatrix) -> Dendrogram:
    """Cluster metrics by correlation: distance 1 - r, average linkage.

    Signed by default so anti-correlated metrics sit far apart; the leaf
    order feeds the Hilbert sub-grid assignment.
    """
    return agglomerate(correlation_distance(corr), "average")


def correlation_distance(corr: CorrelationMatrix, absolute: bool = False) -> DistanceMatrix:
    r = np.abs(corr.values) if absolute else corr.values
    values = 1.0 - r
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values, corr.metric_order, "1-|r|" if absolute else "1-r")


def boundaries_for_cut(dendrogram: Dendrogram, labels: np.ndarray) -> tuple[int, ...]:
    """Positions along the leaf order where the cluster label changes."""
    order = leaf_order(dendrogram)
    return tuple(
        pos
        for pos in range(1, len(order))
        if labels[order[pos]] != labels[order[pos - 1]]
    )
