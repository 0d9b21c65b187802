import { describe, expect, it } from "vitest";

import { buildParallelScene } from "../src/parallel.js";
import {
  createView,
  selectEntities,
  setBundling,
  setSmoothing,
  toggleVisible,
} from "../src/state.js";
import { CATEGORICAL, RAMP_END, RAMP_START } from "../src/colors.js";
import type { MetricsResponse } from "../src/types.js";
import { loadCluster, loadMetrics, pathPoints } from "./helpers.js";

function miniMetrics(
  entities: string[],
  metricOrder: string[],
  values: number[][],
): MetricsResponse {
  return {
    session_id: "t",
    entities,
    metric_order: metricOrder,
    values,
    normalized: values,
    defined_counts: values.map((row) => row.map(() => 1)),
    warnings: [],
  };
}

const SIZE = { width: 100, height: 100 };

describe("buildParallelScene", () => {
  it("draws one polyline per entity", () => {
    const metrics = loadMetrics();
    const view = createView(metrics.metric_order);
    const scene = buildParallelScene(metrics, view, {
      width: 860,
      height: 360,
    });
    expect(scene.polylines.length).toBe(metrics.entities.length);
    expect(scene.axes.length).toBe(metrics.metric_order.length);
  });

  it("one entity across three axes with smoothing 0 gives two straight segments", () => {
    const metrics = miniMetrics(["e1"], ["A", "B", "C"], [[0, 5, 2]]);
    const view = createView(metrics.metric_order);
    const scene = buildParallelScene(metrics, view, SIZE);
    const points = pathPoints(scene.polylines[0].path);
    expect(points.length).toBe(3);
    expect(points.map((p) => p.x)).toEqual([0, 50, 100]);
  });

  it("smoothing above zero emits the sampled curve", () => {
    const metrics = miniMetrics(
      ["e1"],
      ["A", "B", "C"],
      [[0, 5, 2]],
    );
    const view = setSmoothing(createView(metrics.metric_order), 0.5);
    const scene = buildParallelScene(metrics, view, SIZE);
    const points = pathPoints(scene.polylines[0].path);
    expect(points.length).toBe(2 * 16 + 1);
  });

  it("axes are evenly spaced and hidden axes drop out", () => {
    const metrics = miniMetrics(
      ["e1", "e2"],
      ["A", "B", "C"],
      [
        [0, 1, 2],
        [3, 4, 5],
      ],
    );
    const view = toggleVisible(createView(metrics.metric_order), "B");
    const scene = buildParallelScene(metrics, view, SIZE);
    expect(scene.axes.map((a) => a.metric)).toEqual(["A", "C"]);
    expect(scene.axes.map((a) => a.x)).toEqual([0, 100]);
  });

  it("highlights exactly the selected entities", () => {
    const metrics = loadMetrics();
    const picked = metrics.entities.slice(3, 8);
    const view = selectEntities(createView(metrics.metric_order), picked);
    const scene = buildParallelScene(metrics, view, {
      width: 860,
      height: 360,
    });
    const highlighted = scene.polylines
      .filter((line) => line.highlighted)
      .map((line) => line.entity);
    expect(highlighted.sort()).toEqual([...picked].sort());
  });

  it("cluster labels give discrete colors with at most k values", () => {
    const metrics = loadMetrics();
    const labels = loadCluster().labels;
    expect(labels).not.toBeNull();
    if (!labels) return;
    const view = createView(metrics.metric_order);
    const scene = buildParallelScene(metrics, view, {
      width: 860,
      height: 360,
      labels,
    });
    const distinct = new Set(scene.polylines.map((line) => line.color));
    expect(distinct.size).toBeLessThanOrEqual(2);
    scene.polylines.forEach((line, r) => {
      expect(line.color).toBe(CATEGORICAL[labels[r]]);
    });
  });

  it("without labels the color-source axis drives a sequential ramp", () => {
    const metrics = miniMetrics(
      ["lo", "mid", "hi"],
      ["A", "B"],
      [
        [1, 9],
        [2, 9],
        [3, 9],
      ],
    );
    const view = createView(metrics.metric_order); // color source: A
    const scene = buildParallelScene(metrics, view, SIZE);
    expect(scene.polylines[0].color).toBe(RAMP_START);
    expect(scene.polylines[2].color).toBe(RAMP_END);
  });

  it("a merged column supplies values for its axis", () => {
    const metrics = miniMetrics(
      ["e1", "e2"],
      ["A"],
      [[1], [2]],
    );
    const view = createView(["A", "W-Avg"]);
    const scene = buildParallelScene(metrics, view, {
      ...SIZE,
      merged: { metric: "W-Avg", values: [0.25, 0.75] },
    });
    const mergedAxis = scene.axes.find((a) => a.metric === "W-Avg")!;
    expect(mergedAxis.domain).toEqual([0.25, 0.75]);
  });

  it("unknown axis metrics without a merged column are rejected", () => {
    const metrics = miniMetrics(["e1"], ["A"], [[1]]);
    const view = createView(["A", "W-Avg"]);
    expect(() => buildParallelScene(metrics, view, SIZE)).toThrow(
      /unknown metric W-Avg/,
    );
  });

  it("full bundling pulls both entities onto the centroid midpoint", () => {
    const metrics = miniMetrics(
      ["e1", "e2"],
      ["A", "B"],
      [
        [0, 2],
        [10, 4],
      ],
    );
    const view = setBundling(createView(metrics.metric_order), 1);
    const scene = buildParallelScene(metrics, view, SIZE);
    const midPoints = scene.polylines.map((line) => {
      const points = pathPoints(line.path);
      const at = points.find((p) => p.x === 50);
      expect(at).toBeDefined();
      return at!.y;
    });
    // both pass through the shared centroid midpoint
    expect(midPoints[0]).toBeCloseTo(50, 9);
    expect(midPoints[1]).toBeCloseTo(50, 9);
    // endpoints stay put
    const first = pathPoints(scene.polylines[0].path);
    expect(first[0].y).toBeCloseTo(100, 9);
    expect(first[first.length - 1].y).toBeCloseTo(100, 9);
  });

  it("bundling with labels uses one centroid per group", () => {
    const metrics = miniMetrics(
      ["e1", "e2", "e3", "e4"],
      ["A", "B"],
      [
        [0, 0],
        [2, 2],
        [8, 8],
        [10, 10],
      ],
    );
    const view = setBundling(createView(metrics.metric_order), 1);
    const scene = buildParallelScene(metrics, view, {
      ...SIZE,
      labels: [0, 0, 1, 1],
    });
    const midY = (i: number) =>
      pathPoints(scene.polylines[i].path).find((p) => p.x === 50)!.y;
    expect(midY(0)).toBeCloseTo(midY(1), 9);
    expect(midY(2)).toBeCloseTo(midY(3), 9);
    expect(Math.abs(midY(0) - midY(2))).toBeGreaterThan(1);
  });
});
