// Browser entry point. All analysis values come from the service; this
// file only wires DOM events to the pure scene builders and view-state
// transitions.

import { ApiError, RequestGate, ServiceClient } from "./api.js";
import { brushedSelection, tableAccessor } from "./brushing.js";
import {
  buildMatrixScene,
  groupAt,
  groupEntities,
  hitTest,
  scanpathOverlay,
  tooltipInfo,
} from "./matrix.js";
import { buildParallelScene } from "./parallel.js";
import {
  ViewState,
  ViewStore,
  createView,
  selectEntities,
  setBrush,
  setBundling,
  setColorSource,
  setDraftWeight,
  setMatrixKey,
  setSmoothing,
  toggleInvert,
  toggleVisible,
} from "./state.js";
import type {
  ClusterResponse,
  LayoutResponse,
  MetricsResponse,
} from "./types.js";
import {
  draftToRequest,
  formatAxisValue,
  formatWeight,
  validateDraft,
} from "./weights.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PC_WIDTH = 860;
const PC_HEIGHT = 360;
const CELL_PX = 16;
const MERGED_AXIS = "W-Avg";

interface AppData {
  sessionId: string;
  metrics: MetricsResponse;
  cluster: ClusterResponse | null;
  layout: LayoutResponse | null;
}

// same-origin by default; ?service=http://host:port points the UI at a
// service running elsewhere
function serviceBase(): string {
  if (typeof location === "undefined") return "";
  const base = new URLSearchParams(location.search).get("service") ?? "";
  return base.replace(/\/$/, "");
}

const client = new ServiceClient(serviceBase());
const matrixGate = new RequestGate();

let data: AppData | null = null;
let store: ViewStore | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const node = byId<HTMLElement>("status");
  node.textContent = text;
  node.className = isError ? "status error" : "status";
}

function mergedColumn(): { metric: string; values: number[] } | undefined {
  return data?.cluster
    ? { metric: MERGED_AXIS, values: data.cluster.wavg }
    : undefined;
}

function currentSelection(): Set<string> {
  if (!data || !store) return new Set();
  return brushedSelection(
    data.metrics.entities,
    store.state.axes,
    tableAccessor(data.metrics, mergedColumn()),
  );
}

// Matrix picks win; otherwise brushes drive the highlight (a brush that
// matches everything reads as "no selection").
function effectiveSelection(): Set<string> {
  if (!data || !store) return new Set();
  if (store.state.selected.size > 0) return store.state.selected as Set<string>;
  const brushed = currentSelection();
  return brushed.size === data.metrics.entities.length
    ? new Set()
    : brushed;
}

function renderParallel(shown: ReadonlySet<string>): void {
  if (!data || !store) return;
  const host = byId<HTMLElement>("pc-host");
  host.textContent = "";
  const svg = svgEl("svg", {
    width: String(PC_WIDTH + 120),
    height: String(PC_HEIGHT + 60),
    viewBox: `0 0 ${PC_WIDTH + 120} ${PC_HEIGHT + 60}`,
  });
  const root = svgEl("g", { transform: "translate(60, 20)" });
  svg.appendChild(root);

  const view: ViewState = { ...store.state, selected: shown };
  const scene = buildParallelScene(data.metrics, view, {
    width: PC_WIDTH,
    height: PC_HEIGHT,
    merged: mergedColumn(),
    labels: data.cluster?.labels ?? null,
  });

  for (const line of scene.polylines) {
    root.appendChild(
      svgEl("path", {
        d: line.path,
        fill: "none",
        stroke: line.color,
        "stroke-width": line.highlighted ? "2.5" : "1",
        "stroke-opacity": line.highlighted
          ? "0.95"
          : shown.size > 0
            ? "0.15"
            : "0.55",
      }),
    );
  }

  for (const axis of scene.axes) {
    const group = svgEl("g", { transform: `translate(${axis.x}, 0)` });
    group.appendChild(
      svgEl("line", {
        x1: "0",
        y1: "0",
        x2: "0",
        y2: String(PC_HEIGHT),
        stroke: "#444",
      }),
    );
    const label = svgEl("text", {
      y: String(PC_HEIGHT + 16),
      "text-anchor": "middle",
      "font-size": "10",
      cursor: "pointer",
    });
    label.textContent = axis.metric + (axis.inverted ? " ↓" : "");
    label.addEventListener("dblclick", () => {
      applyView((v) => toggleInvert(v, axis.metric));
    });
    label.addEventListener("click", (event) => {
      if (event.shiftKey) applyView((v) => setColorSource(v, axis.metric));
    });
    group.appendChild(label);

    const [dLo, dHi] = axis.domain;
    const span = dHi - dLo || 1;
    const yOf = (v: number) =>
      axis.inverted
        ? ((v - dLo) / span) * PC_HEIGHT
        : (1 - (v - dLo) / span) * PC_HEIGHT;

    if (axis.brush) {
      const [lo, hi] = axis.brush;
      const y1 = Math.min(yOf(lo), yOf(hi));
      const y2 = Math.max(yOf(lo), yOf(hi));
      group.appendChild(
        svgEl("rect", {
          x: "-6",
          y: String(y1),
          width: "12",
          height: String(Math.max(1, y2 - y1)),
          fill: "rgba(30, 120, 200, 0.25)",
          stroke: "#1e78c8",
        }),
      );
    }

    // drag along the axis to brush; a short click clears the brush
    const hitArea = svgEl("rect", {
      x: "-8",
      y: "0",
      width: "16",
      height: String(PC_HEIGHT),
      fill: "transparent",
      cursor: "crosshair",
    });
    const yWithin = (event: PointerEvent) => {
      const bounds = (hitArea as SVGGraphicsElement).getBoundingClientRect();
      return Math.max(0, Math.min(PC_HEIGHT, event.clientY - bounds.top));
    };
    const toValue = (y: number) => {
      const t = y / PC_HEIGHT;
      const up = axis.inverted ? t : 1 - t;
      return dLo + up * (dHi - dLo);
    };
    let dragStart: number | null = null;
    hitArea.addEventListener("pointerdown", (event) => {
      dragStart = yWithin(event as PointerEvent);
    });
    hitArea.addEventListener("pointerup", (event) => {
      if (dragStart === null) return;
      const end = yWithin(event as PointerEvent);
      const metric = axis.metric;
      if (Math.abs(end - dragStart) < 3) {
        applyView((v) => setBrush(v, metric, null));
      } else {
        const interval: [number, number] = [
          toValue(dragStart),
          toValue(end),
        ];
        applyView((v) => setBrush(v, metric, interval));
      }
      dragStart = null;
    });
    group.appendChild(hitArea);
    root.appendChild(group);
  }
  host.appendChild(svg);
}

function renderMatrix(): void {
  if (!data?.layout) return;
  const layout = data.layout;
  const canvas = byId<HTMLCanvasElement>("matrix-canvas");
  const scene = buildMatrixScene(layout, CELL_PX);
  canvas.width = scene.px;
  canvas.height = scene.px;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, scene.px, scene.px);
  for (const rect of scene.rects) {
    ctx.fillStyle = rect.fill;
    ctx.fillRect(rect.x, rect.y, rect.size, rect.size);
  }
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 2;
  for (const rule of scene.rules) {
    ctx.beginPath();
    ctx.moveTo(rule.x1, rule.y1);
    ctx.lineTo(rule.x2, rule.y2);
    ctx.stroke();
  }

  const tooltip = byId<HTMLElement>("tooltip");
  const hitAt = (event: MouseEvent) => {
    const bounds = canvas.getBoundingClientRect();
    return hitTest(
      layout,
      CELL_PX,
      event.clientX - bounds.left,
      event.clientY - bounds.top,
    );
  };
  canvas.onpointermove = (event) => {
    const hit = hitAt(event);
    if (!hit) {
      tooltip.style.display = "none";
      return;
    }
    const info = tooltipInfo(layout, hit);
    tooltip.textContent =
      `${info.rowEntity} × ${info.colEntity} · ${info.metric}` +
      ` · d̂ ${formatAxisValue(info.dhat)}`;
    tooltip.style.display = "block";
    tooltip.style.left = `${event.pageX + 12}px`;
    tooltip.style.top = `${event.pageY + 12}px`;
  };
  canvas.onpointerleave = () => {
    tooltip.style.display = "none";
  };
  canvas.onclick = (event) => {
    const hit = hitAt(event);
    if (!hit) return;
    const members = groupEntities(layout, groupAt(layout, hit.row));
    applyView((v) => selectEntities(v, members));
  };
}

async function showScanpath(participantId: string): Promise<void> {
  if (!data) return;
  const stimulus = byId<HTMLInputElement>("stimulus-id").value.trim();
  if (!stimulus) return;
  try {
    const scanpath = await client.getScanpath(
      data.sessionId,
      participantId,
      stimulus,
    );
    const host = byId<HTMLElement>("overlay-host");
    host.textContent = "";
    const svg = svgEl("svg", {
      width: "512",
      height: "384",
      viewBox: "0 0 1024 768",
    });
    const points = scanpathOverlay(scanpath);
    let prev: { x: number; y: number } | null = null;
    for (const point of points) {
      if (prev) {
        svg.appendChild(
          svgEl("line", {
            x1: String(prev.x),
            y1: String(prev.y),
            x2: String(point.x),
            y2: String(point.y),
            stroke: "#999",
          }),
        );
      }
      prev = point;
    }
    for (const point of points) {
      svg.appendChild(
        svgEl("circle", {
          cx: String(point.x),
          cy: String(point.y),
          r: String(point.r),
          fill: point.fill,
          "fill-opacity": "0.8",
        }),
      );
    }
    host.appendChild(svg);
    setStatus(`scanpath ${participantId} / ${stimulus}`);
  } catch (error) {
    setStatus(describeError(error), true);
  }
}

function renderWeightPanel(): void {
  if (!data || !store) return;
  const host = byId<HTMLElement>("weight-rows");
  host.textContent = "";
  for (const metric of data.metrics.metric_order) {
    const row = el("div", { class: "weight-row" });
    row.appendChild(el("span", {}, metric));
    const input = el("input", {
      type: "number",
      min: "0",
      max: "1",
      step: "0.05",
      value: String(store.state.weightDraft[metric] ?? 0),
    }) as HTMLInputElement;
    input.addEventListener("input", () => {
      const w = Number(input.value);
      applyView((v) => setDraftWeight(v, metric, Number.isFinite(w) ? w : 0), {
        skipRender: true,
      });
      refreshCommitState();
    });
    row.appendChild(input);
    host.appendChild(row);
  }
  refreshCommitState();
}

function renderAxisToggles(): void {
  if (!data || !store) return;
  const host = byId<HTMLElement>("axis-toggles");
  host.textContent = "";
  for (const axis of store.state.axes) {
    const label = el("label", { class: "axis-toggle" });
    const box = el("input", { type: "checkbox" }) as HTMLInputElement;
    box.checked = axis.visible;
    box.dataset.metric = axis.metric;
    label.appendChild(box);
    label.appendChild(el("span", {}, axis.metric));
    host.appendChild(label);
  }
}

function refreshCommitState(): void {
  if (!data || !store) return;
  const check = validateDraft(
    store.state.weightDraft,
    data.metrics.metric_order,
  );
  const button = byId<HTMLButtonElement>("commit-weights");
  button.disabled = !check.ok;
  byId<HTMLElement>("weight-message").textContent = check.ok
    ? `sum ${formatWeight(check.total)}`
    : check.errors.join("; ");
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return String(error);
}

async function commitWeights(): Promise<void> {
  if (!data || !store) return;
  const check = validateDraft(
    store.state.weightDraft,
    data.metrics.metric_order,
  );
  if (!check.ok) return;
  const k = Number(byId<HTMLInputElement>("cut-k").value) || undefined;
  const sessionId = data.sessionId;
  try {
    const cluster = await client.postCluster(sessionId, {
      weights: draftToRequest(store.state.weightDraft),
      k,
    });
    data.cluster = cluster;
    applyView((v) => setMatrixKey(v, cluster.key), { skipRender: true });
    const layout = await matrixGate.run(() =>
      client.getMatrix(sessionId, cluster.key),
    );
    if (layout) {
      data.layout = layout;
      renderAll();
      setStatus(`clustered: ${cluster.key}`);
    }
  } catch (error) {
    setStatus(describeError(error), true);
  }
}

interface ApplyOptions {
  skipRender?: boolean;
}

function applyView(
  transition: (v: ViewState) => ViewState,
  options: ApplyOptions = {},
): void {
  if (!store) return;
  store.apply(transition);
  if (!options.skipRender) renderAll();
}

function renderAll(): void {
  if (!data || !store) return;
  const shown = effectiveSelection();
  renderParallel(shown);
  renderMatrix();
  renderAxisToggles();
  byId<HTMLElement>("selection-count").textContent =
    shown.size > 0 ? `${shown.size} selected` : "no selection";
}

async function loadFile(file: File): Promise<void> {
  try {
    setStatus("uploading…");
    const bytes = new Uint8Array(await file.arrayBuffer());
    const created = await client.createSession(bytes);
    const metrics = await client.getMetrics(created.session_id);
    const layout = await client.getMatrix(created.session_id);
    data = { sessionId: created.session_id, metrics, cluster: null, layout };
    store = new ViewStore(createView(metrics.metric_order));
    renderWeightPanel();
    renderAll();
    renderEntityList();
    setStatus(
      `session ${created.session_id}: ${created.entities.length} entities, ` +
        `${created.n_fixations} fixations`,
    );
  } catch (error) {
    setStatus(describeError(error), true);
  }
}

function renderEntityList(): void {
  if (!data) return;
  const host = byId<HTMLElement>("entity-list");
  host.textContent = "";
  for (const entity of data.metrics.entities) {
    const link = el("a", { href: "#", class: "entity" }, entity);
    link.addEventListener("click", (event) => {
      event.preventDefault();
      void showScanpath(entity);
    });
    host.appendChild(link);
  }
}

export function start(): void {
  byId<HTMLInputElement>("file-input").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    if (input.files && input.files[0]) void loadFile(input.files[0]);
  });
  byId<HTMLButtonElement>("commit-weights").addEventListener("click", () => {
    void commitWeights();
  });
  byId<HTMLInputElement>("smoothing").addEventListener("input", (event) => {
    const v = Number((event.target as HTMLInputElement).value);
    applyView((view) => setSmoothing(view, v));
  });
  byId<HTMLInputElement>("bundling").addEventListener("input", (event) => {
    const v = Number((event.target as HTMLInputElement).value);
    applyView((view) => setBundling(view, v));
  });
  byId<HTMLButtonElement>("clear-selection").addEventListener("click", () => {
    applyView((view) => selectEntities(view, []));
  });
  byId<HTMLButtonElement>("undo").addEventListener("click", () => {
    if (store) {
      store.undo();
      renderAll();
    }
  });
  document.addEventListener("keydown", (event) => {
    if ((event.ctrlKey || event.metaKey) && event.key === "z") {
      event.preventDefault();
      if (store) {
        store.undo();
        renderAll();
      }
    }
  });
  byId<HTMLElement>("axis-toggles").addEventListener("change", (event) => {
    const box = event.target as HTMLInputElement;
    if (box.dataset.metric) {
      applyView((view) => toggleVisible(view, box.dataset.metric as string));
    }
  });
}

if (typeof document !== "undefined") {
  if (document.readyState !== "loading") {
    start();
  } else {
    document.addEventListener("DOMContentLoaded", start);
  }
}
