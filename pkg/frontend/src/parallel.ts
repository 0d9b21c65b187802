// Parallel-coordinates scene: one polyline (or smoothed, optionally
// bundled curve) per entity across the visible axes.

import type { MetricsResponse } from "./types.js";
import type { ViewState } from "./state.js";
import { colorSource, visibleAxes } from "./state.js";
import {
  Point,
  axisScale,
  bundledKnots,
  sampleCurve,
  toPathData,
} from "./geometry.js";
import { categoricalColor, sequentialColor } from "./colors.js";

export interface SceneOptions {
  width: number;
  height: number;
  merged?: { metric: string; values: number[] }; // server W-Avg column
  labels?: number[] | null; // discrete colors from server cut
}

export interface AxisMark {
  metric: string;
  x: number;
  inverted: boolean;
  brush: [number, number] | null;
  domain: [number, number];
}

export interface Polyline {
  entity: string;
  path: string;
  color: string;
  highlighted: boolean;
}

export interface ParallelScene {
  axes: AxisMark[];
  polylines: Polyline[];
}

function columnDomain(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function buildParallelScene(
  metrics: MetricsResponse,
  view: ViewState,
  options: SceneOptions,
): ParallelScene {
  const axes = visibleAxes(view);
  if (axes.length === 0 || metrics.entities.length === 0) {
    return { axes: [], polylines: [] };
  }
  const step = axes.length > 1 ? options.width / (axes.length - 1) : 0;
  const colIndex = new Map(metrics.metric_order.map((m, i) => [m, i]));

  const columns = axes.map((axis) => {
    if (options.merged && axis.metric === options.merged.metric) {
      return options.merged.values;
    }
    const c = colIndex.get(axis.metric);
    if (c === undefined) throw new Error(`unknown metric ${axis.metric}`);
    return metrics.values.map((row) => row[c]);
  });
  const domains = columns.map(columnDomain);
  const scales = axes.map((axis, i) =>
    axisScale(domains[i], options.height, axis.inverted),
  );

  const knotRows: Point[][] = metrics.entities.map((_, r) =>
    axes.map((axis, i) => ({ x: i * step, y: scales[i](columns[i][r]) })),
  );

  // cluster centroid polylines for bundling, one per label (all entities
  // share one centroid when no labels are given)
  let centroids: Point[][] | null = null;
  if (view.bundling > 0) {
    const byLabel = new Map<number, number[]>();
    metrics.entities.forEach((_, r) => {
      const label = options.labels ? options.labels[r] : 0;
      const rows = byLabel.get(label) ?? [];
      rows.push(r);
      byLabel.set(label, rows);
    });
    const centroidFor = new Map<number, Point[]>();
    for (const [label, rows] of byLabel) {
      centroidFor.set(
        label,
        axes.map((_, i) => {
          const mean =
            rows.reduce((acc, r) => acc + knotRows[r][i].y, 0) / rows.length;
          return { x: i * step, y: mean };
        }),
      );
    }
    centroids = metrics.entities.map((_, r) => {
      const label = options.labels ? options.labels[r] : 0;
      return centroidFor.get(label) as Point[];
    });
  }

  const source = colorSource(view);
  const sourceIndex = source
    ? axes.findIndex((a) => a.metric === source.metric)
    : -1;

  const polylines: Polyline[] = metrics.entities.map((entity, r) => {
    let knots = knotRows[r];
    if (centroids) {
      knots = bundledKnots(knots, centroids[r], view.bundling);
    }
    const sampled =
      view.smoothing > 0 || centroids
        ? sampleCurve(knots, view.smoothing)
        : knots;

    let color: string;
    if (options.labels) {
      color = categoricalColor(options.labels[r]);
    } else if (sourceIndex >= 0) {
      const [lo, hi] = domains[sourceIndex];
      const v = columns[sourceIndex][r];
      color = sequentialColor(hi === lo ? 0 : (v - lo) / (hi - lo));
    } else {
      color = sequentialColor(0);
    }
    return {
      entity,
      path: toPathData(sampled),
      color,
      highlighted: view.selected.has(entity),
    };
  });

  return {
    axes: axes.map((axis, i) => ({
      metric: axis.metric,
      x: i * step,
      inverted: axis.inverted,
      brush: axis.brush,
      domain: domains[i],
    })),
    polylines,
  };
}
