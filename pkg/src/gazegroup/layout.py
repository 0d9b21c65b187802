"""Dimensionally stacked matrix layout and rendering.

Every entity-pair cell subdivides into a Hilbert-ordered sub-grid with one
sub-cell per metric, so metrics that cluster together stay spatially
adjacent. Each sub-cell encodes one pairwise distance as a color: hue
identifies the metric, lightness encodes the distance. Hues step by 20
degrees along the Hilbert walk, so grid-adjacent metrics get neighboring
hues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .colorspace import lch_to_srgb8
from .hilbert import d2xy, side_length, subgrid_order
from .similarity import SimilarityTensor

HUE_STEP_DEG = 20.0
# Largest chroma that stays inside sRGB for every 20-degree hue step at
# both ends of the lightness range; larger values clip per channel and
# distort the hue ramp.
DEFAULT_CHROMA = 13.5
DEFAULT_L_RANGE = (30.0, 90.0)


@dataclass(frozen=True)
class ColorSpec:
    """Binds each metric to a hue and maps distance to lightness.

    Lightness runs bright-to-dark as distance grows, so similar pairs pop;
    ``invert_lightness`` flips that for dark backgrounds.
    """

    hue_by_metric: tuple[tuple[str, float], ...]
    chroma: float = DEFAULT_CHROMA
    l_range: tuple[float, float] = DEFAULT_L_RANGE
    invert_lightness: bool = False

    def hue(self, metric_id: str) -> float:
        for mid, h in self.hue_by_metric:
            if mid == metric_id:
                return h
        raise KeyError(f"no hue assigned to metric {metric_id!r}")

    def lightness(self, dhat: float) -> float:
        lo, hi = self.l_range
        if self.invert_lightness:
            return lo + (hi - lo) * dhat
        return hi - (hi - lo) * dhat


def assign_colors(
    metric_ids: Sequence[str],
    chroma: float = DEFAULT_CHROMA,
    l_range: tuple[float, float] = DEFAULT_L_RANGE,
    invert_lightness: bool = False,
) -> ColorSpec:
    """Hue k goes to the k-th metric of the given (display) order:
    0, 20, 40, ... degrees, one step per position."""
    if not metric_ids:
        raise ValueError("need at least one metric")
    hues = tuple(
        (mid, (HUE_STEP_DEG * k) % 360.0) for k, mid in enumerate(metric_ids)
    )
    return ColorSpec(hues, chroma, l_range, invert_lightness)


def encode_cell_color(spec: ColorSpec, metric_id: str, dhat: float) -> tuple[int, int, int]:
    if not 0.0 <= dhat <= 1.0 + 1e-12:
        raise ValueError(f"normalized distance must be in [0, 1], got {dhat}")
    return lch_to_srgb8(
        spec.lightness(min(dhat, 1.0)), spec.chroma, spec.hue(metric_id)
    )


@dataclass(frozen=True)
class SubgridAssignment:
    """Placement of each metric inside the per-pair sub-grid; Hilbert
    cells past the metric count stay empty."""

    order: int
    side: int
    metric_ids: tuple[str, ...]  # display order (cluster leaf order)
    positions: tuple[tuple[int, int], ...]  # (col, row) per metric, same order

    def metric_at_cell(self, col: int, row: int) -> str | None:
        for mid, pos in zip(self.metric_ids, self.positions):
            if pos == (col, row):
                return mid
        return None

    def empty_cells(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            d2xy(self.order, d)
            for d in range(len(self.metric_ids), self.side * self.side)
        )


def assign_subgrid(metric_ids: Sequence[str], order: int | None = None) -> SubgridAssignment:
    """Walk the Hilbert curve through the sub-grid, placing metrics in the
    given order so neighbors in the order stay neighbors in the grid."""
    n = len(metric_ids)
    if n == 0:
        raise ValueError("need at least one metric")
    if order is None:
        order = subgrid_order(n)
    if n > 4**order:
        raise ValueError(f"{n} metrics exceed the {4 ** order} cells of order {order}")
    positions = tuple(d2xy(order, i) for i in range(n))
    return SubgridAssignment(order, side_length(order), tuple(metric_ids), positions)


@dataclass(frozen=True)
class MatrixLayout:
    entity_order: tuple[str, ...]  # row/column ids, dendrogram leaf order
    leaf_indices: tuple[int, ...]  # original entity index per display slot
    subgrid: SubgridAssignment
    colors: np.ndarray = field(repr=False)  # (p, p, n, 3) uint8, display order
    dhat: np.ndarray = field(repr=False)  # (p, p, n) in [0, 1], display order
    group_boundaries: tuple[int, ...]  # display slots where a cluster break sits
    color_spec: ColorSpec


def normalize_tensor(tensor: SimilarityTensor) -> np.ndarray:
    """Scale each metric slice by its own maximum pairwise distance so the
    full lightness range is spent on every metric. All-equal slices map
    to 0 (everything reads as identical)."""
    sv = tensor.values
    peaks = sv.max(axis=(0, 1))
    safe = np.where(peaks > 0.0, peaks, 1.0)
    return sv / safe


def build_matrix_layout(
    tensor: SimilarityTensor,
    entity_leaf_order: Sequence[int],
    subgrid: SubgridAssignment,
    color_spec: ColorSpec | None = None,
    group_boundaries: Sequence[int] = (),
) -> MatrixLayout:
    spec = color_spec or assign_colors(subgrid.metric_ids)
    p = len(tensor.entity_order)
    n = len(subgrid.metric_ids)
    if sorted(entity_leaf_order) != list(range(p)):
        raise ValueError("entity leaf order must permute all entity indices")
    try:
        metric_slots = [tensor.metric_order.index(mid) for mid in subgrid.metric_ids]
    except ValueError as exc:
        raise ValueError(f"sub-grid metric missing from tensor: {exc}") from exc

    dhat_all = normalize_tensor(tensor)
    perm = np.asarray(tuple(entity_leaf_order))
    dhat = dhat_all[np.ix_(perm, perm, np.asarray(metric_slots))]

    # Distinct distance values are few next to p*p cells, so color via a
    # per-metric lookup of the unique levels.
    colors = np.empty((p, p, n, 3), dtype=np.uint8)
    for slot, mid in enumerate(subgrid.metric_ids):
        levels, inverse = np.unique(dhat[:, :, slot], return_inverse=True)
        lut = np.array(
            [encode_cell_color(spec, mid, float(v)) for v in levels], dtype=np.uint8
        )
        colors[:, :, slot, :] = lut[inverse].reshape(p, p, 3)

    return MatrixLayout(
        entity_order=tuple(tensor.entity_order[i] for i in entity_leaf_order),
        leaf_indices=tuple(entity_leaf_order),
        subgrid=subgrid,
        colors=colors,
        dhat=dhat,
        group_boundaries=tuple(group_boundaries),
        color_spec=spec,
    )


LABEL_MARGIN_PX = 48
_FONT = 'font-family="sans-serif" font-size="10"'


def _hex(rgb: np.ndarray) -> str:
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


def _fmt(v: float) -> str:
    return f"{v:g}"


def render_svg(layout: MatrixLayout, cell_px: int = 24) -> str:
    """Deterministic standalone SVG: p*p*n sub-cell rects, one entity
    label per row and per column, and one white path per cluster boundary
    (each path carries the horizontal and the vertical rule)."""
    side = layout.subgrid.side
    if cell_px < side:
        raise ValueError(
            f"cell_px {cell_px} leaves sub-cells under 1 px (side {side})"
        )
    p = len(layout.entity_order)
    n = len(layout.subgrid.metric_ids)
    sub = cell_px / side
    m = LABEL_MARGIN_PX
    extent = p * cell_px
    size = m + extent

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    for row in range(p):
        for col in range(p):
            x0 = m + col * cell_px
            y0 = m + row * cell_px
            for slot in range(n):
                sc, sr = layout.subgrid.positions[slot]
                rgb = layout.colors[row, col, slot]
                parts.append(
                    f'<rect x="{_fmt(x0 + sc * sub)}" y="{_fmt(y0 + sr * sub)}" '
                    f'width="{_fmt(sub)}" height="{_fmt(sub)}" fill="{_hex(rgb)}"/>'
                )
    for i, entity in enumerate(layout.entity_order):
        cy = m + i * cell_px + cell_px / 2
        parts.append(
            f'<text x="{m - 4}" y="{_fmt(cy)}" text-anchor="end" '
            f'dominant-baseline="middle" {_FONT}>{_esc(entity)}</text>'
        )
        parts.append(
            f'<text x="{_fmt(cy)}" y="{m - 4}" text-anchor="start" '
            f'dominant-baseline="middle" {_FONT} '
            f'transform="rotate(-90 {_fmt(cy)} {m - 4})">{_esc(entity)}</text>'
        )
    for pos in layout.group_boundaries:
        t = m + pos * cell_px
        parts.append(
            f'<path d="M {m} {t} H {size} M {t} {m} V {size}" '
            f'stroke="#ffffff" stroke-width="2" fill="none"/>'
        )
    parts.append("</svg>")
    return "".join(parts)


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def layout_to_json(layout: MatrixLayout) -> dict:
    p = len(layout.entity_order)
    n = len(layout.subgrid.metric_ids)
    cells = [
        [[_hex(layout.colors[r, c, s]) for s in range(n)] for c in range(p)]
        for r in range(p)
    ]
    return {
        "entity_order": list(layout.entity_order),
        "leaf_indices": list(layout.leaf_indices),
        "metric_order": list(layout.subgrid.metric_ids),
        "subgrid": {
            "order": layout.subgrid.order,
            "side": layout.subgrid.side,
            "positions": [list(pos) for pos in layout.subgrid.positions],
        },
        "cells": cells,
        "dhat": [
            [[round(float(layout.dhat[r, c, s]), 6) for s in range(n)] for c in range(p)]
            for r in range(p)
        ],
        "group_boundaries": list(layout.group_boundaries),
        "color": {
            "chroma": layout.color_spec.chroma,
            "l_range": list(layout.color_spec.l_range),
            "invert_lightness": layout.color_spec.invert_lightness,
            "hues": {mid: h for mid, h in layout.color_spec.hue_by_metric},
        },
    }
