// View state and its transitions. Every transition is a pure function
// returning a fresh state, so the undo stack can hold exact snapshots.

import type { MetricId } from "./types.js";

export interface AxisState {
  metric: MetricId;
  position: number; // ordinal among visible axes, -1 when hidden
  inverted: boolean;
  visible: boolean;
  brush: [number, number] | null; // data-unit interval, lo <= hi
  colorSource: boolean;
}

export interface ViewState {
  axes: AxisState[]; // list order = display order of visible axes
  smoothing: number; // [0, 1]
  bundling: number; // [0, 1]
  weightDraft: Record<MetricId, number>;
  selected: ReadonlySet<string>;
  matrixKey: string;
}

export const DEFAULT_MATRIX_KEY = "__input_order__";

export function createView(metrics: MetricId[]): ViewState {
  const axes = metrics.map((metric, i) => ({
    metric,
    position: i,
    inverted: false,
    visible: true,
    brush: null,
    colorSource: i === 0,
  }));
  return {
    axes,
    smoothing: 0,
    bundling: 0,
    weightDraft: {},
    selected: new Set(),
    matrixKey: DEFAULT_MATRIX_KEY,
  };
}

function findAxis(view: ViewState, metric: MetricId): number {
  const i = view.axes.findIndex((a) => a.metric === metric);
  if (i < 0) throw new Error(`unknown axis ${metric}`);
  return i;
}

// Recompute ordinals: visible axes get 0..v-1 in list order, hidden -1.
function renumber(axes: AxisState[]): AxisState[] {
  let next = 0;
  return axes.map((a) => ({ ...a, position: a.visible ? next++ : -1 }));
}

export function visibleAxes(view: ViewState): AxisState[] {
  return view.axes.filter((a) => a.visible);
}

export function reorderAxis(
  view: ViewState,
  metric: MetricId,
  newPosition: number,
): ViewState {
  const from = findAxis(view, metric);
  if (!view.axes[from].visible) throw new Error(`axis ${metric} is hidden`);
  const visible = visibleAxes(view);
  const clamped = Math.max(0, Math.min(visible.length - 1, newPosition));

  const without = view.axes.filter((_, i) => i !== from);
  // insert before the axis currently holding the target visible ordinal
  let insertAt = without.length;
  let seen = 0;
  for (let i = 0; i < without.length; i++) {
    if (!without[i].visible) continue;
    if (seen === clamped) {
      insertAt = i;
      break;
    }
    seen++;
  }
  const axes = without.slice();
  axes.splice(insertAt, 0, view.axes[from]);
  return { ...view, axes: renumber(axes) };
}

export function toggleInvert(view: ViewState, metric: MetricId): ViewState {
  const i = findAxis(view, metric);
  const axes = view.axes.map((a, j) =>
    j === i ? { ...a, inverted: !a.inverted } : a,
  );
  return { ...view, axes };
}

export function toggleVisible(view: ViewState, metric: MetricId): ViewState {
  const i = findAxis(view, metric);
  const hiding = view.axes[i].visible;
  const axes = view.axes.map((a, j) => {
    if (j !== i) return a;
    // hiding clears the brush; an invisible constraint would still filter
    return hiding
      ? { ...a, visible: false, brush: null, colorSource: false }
      : { ...a, visible: true };
  });
  return { ...view, axes: renumber(axes) };
}

export function setBrush(
  view: ViewState,
  metric: MetricId,
  interval: [number, number] | null,
): ViewState {
  const i = findAxis(view, metric);
  if (!view.axes[i].visible) throw new Error(`axis ${metric} is hidden`);
  let brush: [number, number] | null = null;
  if (interval !== null) {
    const [a, b] = interval;
    brush = a <= b ? [a, b] : [b, a];
  }
  const axes = view.axes.map((a, j) => (j === i ? { ...a, brush } : a));
  return { ...view, axes };
}

export function setColorSource(view: ViewState, metric: MetricId): ViewState {
  const i = findAxis(view, metric);
  if (!view.axes[i].visible) throw new Error(`axis ${metric} is hidden`);
  const axes = view.axes.map((a, j) => ({ ...a, colorSource: j === i }));
  return { ...view, axes };
}

export function colorSource(view: ViewState): AxisState | null {
  return view.axes.find((a) => a.colorSource) ?? null;
}

const clamp01 = (v: number) => Math.max(0, Math.min(1, v));

export function setSmoothing(view: ViewState, value: number): ViewState {
  return { ...view, smoothing: clamp01(value) };
}

export function setBundling(view: ViewState, value: number): ViewState {
  return { ...view, bundling: clamp01(value) };
}

export function setDraftWeight(
  view: ViewState,
  metric: MetricId,
  weight: number,
): ViewState {
  const weightDraft = { ...view.weightDraft, [metric]: weight };
  if (weight === 0) delete weightDraft[metric];
  return { ...view, weightDraft };
}

export function selectEntities(
  view: ViewState,
  entities: Iterable<string>,
): ViewState {
  return { ...view, selected: new Set(entities) };
}

export function clearSelection(view: ViewState): ViewState {
  return { ...view, selected: new Set() };
}

export function setMatrixKey(view: ViewState, key: string): ViewState {
  return { ...view, matrixKey: key };
}

// Undo support: the store snapshots the previous state on every apply.
export class ViewStore {
  private past: ViewState[] = [];
  constructor(public state: ViewState) {}

  apply(transition: (v: ViewState) => ViewState): ViewState {
    this.past.push(this.state);
    this.state = transition(this.state);
    return this.state;
  }

  undo(): ViewState {
    const prev = this.past.pop();
    if (prev !== undefined) this.state = prev;
    return this.state;
  }

  get depth(): number {
    return this.past.length;
  }
}
