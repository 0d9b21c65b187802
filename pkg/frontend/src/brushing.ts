// Axis-aligned brushing. Selection is the conjunction (AND) over all
// brushed visible axes; axes without a brush leave the selection
// unconstrained. Intervals are inclusive and live in data units.

import type { AxisState } from "./state.js";
import type { MetricsResponse, MetricId } from "./types.js";

export type ValueAccessor = (entity: string, metric: MetricId) => number;

export function brushedSelection(
  entities: string[],
  axes: AxisState[],
  value: ValueAccessor,
): Set<string> {
  const active = axes.filter((a) => a.visible && a.brush !== null);
  const out = new Set<string>();
  for (const entity of entities) {
    let keep = true;
    for (const axis of active) {
      const [lo, hi] = axis.brush as [number, number];
      const v = value(entity, axis.metric);
      if (!(v >= lo && v <= hi)) {
        keep = false;
        break;
      }
    }
    if (keep) out.add(entity);
  }
  return out;
}

// Accessor over the server metric table, optionally extended with one
// merged column (the server-reported W-Avg values, in upload order).
export function tableAccessor(
  metrics: MetricsResponse,
  merged?: { metric: MetricId; values: number[] },
): ValueAccessor {
  const row = new Map(metrics.entities.map((e, i) => [e, i]));
  const col = new Map(metrics.metric_order.map((m, i) => [m, i]));
  return (entity, metric) => {
    const r = row.get(entity);
    if (r === undefined) throw new Error(`unknown entity ${entity}`);
    if (merged && metric === merged.metric) return merged.values[r];
    const c = col.get(metric);
    if (c === undefined) throw new Error(`unknown metric ${metric}`);
    return metrics.values[r][c];
  };
}
