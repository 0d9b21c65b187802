"""Pairwise entity distances per metric, weighted combinations, and
metric-metric correlations.

Per-metric "similarity values" are plain distances (0 = identical); they
are only inverted at the color-encoding stage. On scalar metrics the
Euclidean distance reduces to the absolute difference, computed on
min-max-normalized values so no metric's unit dominates a weighted
combination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import METRIC_IDS, MetricTable, WeightVector


@dataclass(frozen=True)
class SimilarityTensor:
    """p x p x n per-metric pairwise distances; symmetric, zero diagonal."""

    values: np.ndarray
    entity_order: tuple[str, ...]
    metric_order: tuple[str, ...]

    def slice_for(self, metric: str) -> np.ndarray:
        return self.values[:, :, self.metric_order.index(metric)]


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray  # (p, p) symmetric, zero diagonal
    entity_order: tuple[str, ...]
    provenance: str


@dataclass(frozen=True)
class CorrelationMatrix:
    values: np.ndarray  # (n, n) Pearson r, unit diagonal
    metric_order: tuple[str, ...]
    warnings: tuple[str, ...] = ()


def pairwise_similarity(table: MetricTable, use_raw: bool = False) -> SimilarityTensor:
    """Per-metric |value_i - value_l| over all entity pairs.

    Uses the normalized columns unless use_raw is set.
    """
    source = table.values if use_raw else table.normalized
    if source is None:
        raise ValueError("pairwise_similarity needs a normalized table (or use_raw=True)")
    if not np.isfinite(source).all():
        raise ValueError("metric table contains masked or non-finite cells")
    diffs = np.abs(source[:, None, :] - source[None, :, :])
    return SimilarityTensor(diffs, table.entities, METRIC_IDS)


def combined_distance(
    table: MetricTable,
    weights: WeightVector,
    form: str = "weighted_sum",
) -> DistanceMatrix:
    """Weighted combination of the per-metric distances.

    The default is the weighted sum sum_k w_k * |x_ik - x_lk| (weights act
    linearly, matching the weight-slider semantics); form="euclidean"
    instead takes the L2 norm of the weighted difference vector.
    """
    tensor = pairwise_similarity(table)
    w = weights.as_array()
    if form == "weighted_sum":
        values = np.tensordot(tensor.values, w, axes=([2], [0]))
    elif form == "euclidean":
        values = np.sqrt(np.tensordot(tensor.values**2, w**2, axes=([2], [0])))
    else:
        raise ValueError(f"unknown combination form {form!r}")
    np.fill_diagonal(values, 0.0)
    label = "+".join(f"{w_:g}*{m}" for m, w_ in weights.weights)
    return DistanceMatrix(values, table.entities, label)


def single_metric_distance(table: MetricTable, metric: str) -> DistanceMatrix:
    tensor = pairwise_similarity(table)
    return DistanceMatrix(tensor.slice_for(metric).copy(), table.entities, metric)


def metric_correlations(table: MetricTable) -> CorrelationMatrix:
    """Pearson r between every metric pair, over entities.

    A constant column has no defined correlation; its off-diagonal entries
    are set to 0 with a warning so it sits away from every correlated group.
    """
    if table.n_entities < 3:
        raise ValueError("correlations need at least 3 entities")
    x = table.values
    std = x.std(axis=0)
    constant = std == 0.0
    warnings = tuple(
        f"metric {METRIC_IDS[k]} is constant; correlations set to 0"
        for k in np.flatnonzero(constant)
    )
    safe_std = np.where(constant, 1.0, std)
    z = (x - x.mean(axis=0)) / safe_std
    r = (z.T @ z) / x.shape[0]
    r[constant, :] = 0.0
    r[:, constant] = 0.0
    np.fill_diagonal(r, 1.0)
    r = np.clip(r, -1.0, 1.0)
    # Force exact symmetry against fp drift in the matrix product.
    r = (r + r.T) / 2.0
    return CorrelationMatrix(r, METRIC_IDS, warnings)
