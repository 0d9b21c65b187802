"""The 16 gaze metrics, per-entity aggregation, normalization, and merging.

Metric conventions:
  * saccade i connects fixations i and i+1; its length is the Euclidean
    distance between the fixation centroids, its duration is the gap
    max(0, onset_{i+1} - (onset_i + duration_i))
  * completion time is the fixation span (last onset + last duration -
    first onset) unless a trial-duration sidecar overrides it
  * moments are population moments; kurtosis is excess
  * metrics that need >= 2 fixations (saccade averages, rates over
    saccades, scanpath length, K coefficient, std) or >= 3 (skewness,
    kurtosis) are masked, never silently zero
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ingest import Dataset, Scanpath

METRIC_IDS: tuple[str, ...] = (
    "AvgFix",
    "AvgSac",
    "AvgSacDur",
    "KCoef",
    "FixNum",
    "FixRate",
    "SacNum",
    "SacRate",
    "ScanLen",
    "CompTime",
    "StdX",
    "StdY",
    "SkewX",
    "SkewY",
    "KurtX",
    "KurtY",
)

METRIC_INDEX: dict[str, int] = {m: i for i, m in enumerate(METRIC_IDS)}

N_METRICS = len(METRIC_IDS)

# Metrics undefined on a single-fixation scanpath (SacNum stays defined at 0).
_NEEDS_SACCADES = ("AvgSac", "AvgSacDur", "KCoef", "SacRate", "ScanLen")
_NEEDS_STD = ("StdX", "StdY")
_NEEDS_SHAPE = ("SkewX", "SkewY", "KurtX", "KurtY")


@dataclass(frozen=True)
class MomentSummary:
    """Population mean/std/skewness/excess-kurtosis of one sample.

    Degenerate convention: zero variance forces skewness and kurtosis to 0.
    """

    mean: float
    std: float
    skewness: float
    kurtosis: float


def moments(xs: Sequence[float]) -> MomentSummary:
    if len(xs) == 0:
        raise ValueError("moments of an empty sample")
    arr = np.asarray(xs, dtype=float)
    mean = float(arr.mean())
    centered = arr - mean
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        return MomentSummary(mean, 0.0, 0.0, 0.0)
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    return MomentSummary(mean, math.sqrt(m2), m3 / m2**1.5, m4 / m2**2 - 3.0)


def saccade_lengths(s: Scanpath) -> list[float]:
    return [
        math.hypot(b.x - a.x, b.y - a.y)
        for a, b in zip(s.fixations, s.fixations[1:])
    ]


def saccade_durations(s: Scanpath) -> list[float]:
    # Overlapping fixations are filter artifacts; clamp the gap at 0.
    return [
        max(0.0, b.onset_ms - (a.onset_ms + a.duration_ms))
        for a, b in zip(s.fixations, s.fixations[1:])
    ]


def k_coefficient(s: Scanpath) -> float:
    """Ambient/focal attention coefficient of one scanpath.

    Mean over fixation-saccade pairs of z(duration_i) - z(amplitude_{i+1});
    z-scores use the scanpath-wide population mean and std of all fixation
    durations and all saccade amplitudes. Positive K: long fixations with
    short saccades (focal); negative: the opposite (ambient). A zero std
    contributes zero for that term.
    """
    n = len(s.fixations)
    if n < 2:
        raise ValueError("K coefficient needs at least 2 fixations")
    durations = np.asarray(s.durations())
    amplitudes = np.asarray(saccade_lengths(s))
    mu_d, sigma_d = float(durations.mean()), float(durations.std())
    mu_a, sigma_a = float(amplitudes.mean()), float(amplitudes.std())

    def z(value: float, mu: float, sigma: float) -> float:
        return 0.0 if sigma == 0.0 else (value - mu) / sigma

    terms = [
        z(durations[i], mu_d, sigma_d) - z(amplitudes[i], mu_a, sigma_a)
        for i in range(n - 1)
    ]
    return float(np.mean(terms))


@dataclass(frozen=True)
class MetricVector:
    """One scanpath's 16 metric values plus a defined-ness mask."""

    values: np.ndarray  # (16,) float64, NaN where undefined
    defined: np.ndarray  # (16,) bool

    def value(self, metric: str) -> float:
        return float(self.values[METRIC_INDEX[metric]])

    def is_defined(self, metric: str) -> bool:
        return bool(self.defined[METRIC_INDEX[metric]])


def scanpath_metrics(s: Scanpath, trial_duration_ms: float | None = None) -> MetricVector:
    """All 16 metrics of one scanpath; undefined entries are masked."""
    n = len(s.fixations)
    if n == 0:
        raise ValueError("scanpath without fixations")
    values = np.full(N_METRICS, np.nan)
    defined = np.zeros(N_METRICS, dtype=bool)

    def put(metric: str, value: float) -> None:
        values[METRIC_INDEX[metric]] = value
        defined[METRIC_INDEX[metric]] = True

    durations = s.durations()
    put("FixNum", float(n))
    put("SacNum", float(n - 1))
    put("AvgFix", float(np.mean(durations)))
    last = s.fixations[-1]
    comp_time = last.onset_ms + last.duration_ms - s.fixations[0].onset_ms
    if trial_duration_ms is not None:
        comp_time = trial_duration_ms
    put("CompTime", comp_time)
    put("FixRate", n / (comp_time / 1000.0))

    if n >= 2:
        lengths = saccade_lengths(s)
        scan_len = float(np.sum(lengths))
        put("ScanLen", scan_len)
        put("AvgSac", scan_len / (n - 1))
        put("AvgSacDur", float(np.mean(saccade_durations(s))))
        put("SacRate", (n - 1) / (comp_time / 1000.0))
        put("KCoef", k_coefficient(s))
        mx, my = moments(s.xs()), moments(s.ys())
        put("StdX", mx.std)
        put("StdY", my.std)
        if n >= 3:
            put("SkewX", mx.skewness)
            put("SkewY", my.skewness)
            put("KurtX", mx.kurtosis)
            put("KurtY", my.kurtosis)
    return MetricVector(values, defined)


@dataclass(frozen=True)
class MetricTable:
    """Entities x 16 aggregated metric values; optionally min-max normalized."""

    entities: tuple[str, ...]
    values: np.ndarray  # (p, 16) float64, no NaN
    normalized: np.ndarray | None = None
    warnings: tuple[str, ...] = ()
    # How many scanpaths contributed to each aggregated cell.
    defined_counts: np.ndarray | None = None

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    def column(self, metric: str, normalized: bool = False) -> np.ndarray:
        source = self.normalized if normalized else self.values
        if source is None:
            raise ValueError("table has no normalized values; call normalize() first")
        return source[:, METRIC_INDEX[metric]]


def aggregate(dataset: Dataset, combine: str = "mean") -> MetricTable:
    """One row per entity: per-metric mean (or median) over the entity's
    scanpaths where the metric is defined.

    An entity with a metric defined on none of its scanpaths is dropped
    with a warning, so the resulting table has no masked cells.
    """
    if combine not in ("mean", "median"):
        raise ValueError(f"combine must be 'mean' or 'median', got {combine!r}")
    entities = dataset.entities()
    if not entities:
        raise ValueError("empty dataset")
    reduce = np.mean if combine == "mean" else np.median

    rows = []
    counts_rows = []
    kept = []
    warnings = []
    for entity in entities:
        paths = dataset.scanpaths_for(entity)
        vectors = [
            scanpath_metrics(s, dataset.trial_duration(s.participant_id, s.stimulus_id))
            for s in paths
        ]
        stacked = np.stack([v.values for v in vectors])
        mask = np.stack([v.defined for v in vectors])
        row = np.empty(N_METRICS)
        counts = mask.sum(axis=0)
        missing = [METRIC_IDS[k] for k in range(N_METRICS) if counts[k] == 0]
        if missing:
            warnings.append(
                f"entity {entity!r} dropped: no scanpath defines {', '.join(missing)}"
            )
            continue
        for k in range(N_METRICS):
            row[k] = reduce(stacked[mask[:, k], k])
        rows.append(row)
        counts_rows.append(counts)
        kept.append(entity)

    if not kept:
        raise ValueError("all entities dropped during aggregation")
    return MetricTable(
        tuple(kept),
        np.stack(rows),
        warnings=tuple(warnings),
        defined_counts=np.stack(counts_rows),
    )


def normalize(table: MetricTable) -> MetricTable:
    """Per-column min-max scale to [0, 1]; a constant column becomes all 0.5."""
    if table.n_entities < 2:
        raise ValueError("normalization needs at least 2 entities")
    lo = table.values.min(axis=0)
    hi = table.values.max(axis=0)
    span = hi - lo
    scaled = np.where(span > 0, (table.values - lo) / np.where(span > 0, span, 1.0), 0.5)
    return replace(table, normalized=scaled)


@dataclass(frozen=True)
class WeightVector:
    """Affine-combination weights over a metric subset, summing to 1."""

    weights: tuple[tuple[str, float], ...]  # canonical: sorted by metric id

    def __init__(self, weights: Mapping[str, float] | Iterable[tuple[str, float]]):
        items = dict(weights)
        for metric, w in items.items():
            if metric not in METRIC_INDEX:
                raise ValueError(f"unknown metric {metric!r}")
            if not (0.0 <= w <= 1.0):
                raise ValueError(f"weight for {metric} out of [0, 1]: {w}")
        selected = {m: w for m, w in items.items() if w > 0.0}
        if not selected:
            raise ValueError("no metric selected (all weights zero)")
        total = sum(selected.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")
        object.__setattr__(self, "weights", tuple(sorted(selected.items())))

    @classmethod
    def parse(cls, spec: str) -> "WeightVector":
        """Parse 'Metric=weight,Metric=weight,...'; unlisted metrics weigh 0."""
        items = {}
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ValueError(f"bad weight entry {part!r}; expected Metric=weight")
            name, _, raw = part.partition("=")
            try:
                items[name.strip()] = float(raw)
            except ValueError:
                raise ValueError(f"non-numeric weight in {part!r}")
        return cls(items)

    def as_array(self) -> np.ndarray:
        arr = np.zeros(N_METRICS)
        for metric, w in self.weights:
            arr[METRIC_INDEX[metric]] = w
        return arr

    def selected(self) -> tuple[str, ...]:
        return tuple(m for m, _ in self.weights)

    def cache_key(self) -> str:
        """Canonical form for caching: sorted ids, weights rounded to 1e-6."""
        return ",".join(f"{m}={round(w, 6):.6f}" for m, w in self.weights)


def merge_metrics(table: MetricTable, weights: WeightVector) -> np.ndarray:
    """Weighted average of normalized columns: the derived W-Avg metric.

    Convex by construction, so the result stays in [0, 1]. Usable as an
    extra parallel-coordinates axis and as a clustering basis.
    """
    if table.normalized is None:
        raise ValueError("merge_metrics needs a normalized table")
    return table.normalized @ weights.as_array()


def table_to_csv(
    table: MetricTable,
    wavg: np.ndarray | None = None,
    include_counts: bool = False,
) -> str:
    counts = table.defined_counts if include_counts else None
    header = ["entity_id", *METRIC_IDS]
    if wavg is not None:
        header.append("WAvg")
    if counts is not None:
        header.extend(f"{m}_n" for m in METRIC_IDS)
    lines = [",".join(header)]
    for i, entity in enumerate(table.entities):
        cells = [entity] + [repr(float(v)) for v in table.values[i]]
        if wavg is not None:
            cells.append(repr(float(wavg[i])))
        if counts is not None:
            cells.extend(str(int(c)) for c in counts[i])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def table_to_json(table: MetricTable, wavg: np.ndarray | None = None) -> str:
    payload = {
        "entities": list(table.entities),
        "metric_order": list(METRIC_IDS),
        "values": [[float(v) for v in row] for row in table.values],
    }
    if table.normalized is not None:
        payload["normalized"] = [[float(v) for v in row] for row in table.normalized]
    if wavg is not None:
        payload["wavg"] = [float(v) for v in wavg]
    return json.dumps(payload, indent=2)
