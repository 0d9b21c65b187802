// Similarity-matrix scene building and interaction lookups. Cell colors
// and distance values are taken from the server layout verbatim; the
// client only positions them.

import type { LayoutResponse, MetricId } from "./types.js";
import { temporalColor } from "./colors.js";
import type { FixationOut, ScanpathResponse } from "./types.js";

export interface MatrixRect {
  x: number;
  y: number;
  size: number;
  fill: string;
  row: number;
  col: number;
  slot: number;
}

export interface MatrixRule {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface MatrixScene {
  px: number; // full edge length in pixels
  cellPx: number;
  rects: MatrixRect[];
  rules: MatrixRule[]; // white group separators, two per boundary
  rowLabels: { text: string; index: number }[];
}

export function buildMatrixScene(
  layout: LayoutResponse,
  cellPx: number,
): MatrixScene {
  const p = layout.entity_order.length;
  const side = layout.subgrid.side;
  if (cellPx < side) {
    throw new Error(`cellPx ${cellPx} cannot fit a ${side}x${side} sub-grid`);
  }
  const sub = cellPx / side;
  const rects: MatrixRect[] = [];
  for (let row = 0; row < p; row++) {
    for (let col = 0; col < p; col++) {
      const fills = layout.cells[row][col];
      for (let slot = 0; slot < layout.metric_order.length; slot++) {
        const [sx, sy] = layout.subgrid.positions[slot];
        rects.push({
          x: col * cellPx + sx * sub,
          y: row * cellPx + sy * sub,
          size: sub,
          fill: fills[slot],
          row,
          col,
          slot,
        });
      }
    }
  }
  const px = p * cellPx;
  const rules: MatrixRule[] = [];
  for (const b of layout.group_boundaries) {
    const at = b * cellPx;
    rules.push({ x1: 0, y1: at, x2: px, y2: at });
    rules.push({ x1: at, y1: 0, x2: at, y2: px });
  }
  return {
    px,
    cellPx,
    rects,
    rules,
    rowLabels: layout.entity_order.map((text, index) => ({ text, index })),
  };
}

export interface CellHit {
  row: number;
  col: number;
  slot: number;
}

// Pixel to sub-cell. Returns null outside the matrix or on an empty
// trailing sub-cell.
export function hitTest(
  layout: LayoutResponse,
  cellPx: number,
  px: number,
  py: number,
): CellHit | null {
  const p = layout.entity_order.length;
  if (px < 0 || py < 0 || px >= p * cellPx || py >= p * cellPx) return null;
  const col = Math.floor(px / cellPx);
  const row = Math.floor(py / cellPx);
  const side = layout.subgrid.side;
  const sub = cellPx / side;
  const sx = Math.floor((px - col * cellPx) / sub);
  const sy = Math.floor((py - row * cellPx) / sub);
  const slot = layout.subgrid.positions.findIndex(
    ([x, y]) => x === sx && y === sy,
  );
  if (slot < 0) return null;
  return { row, col, slot };
}

export interface TooltipInfo {
  rowEntity: string;
  colEntity: string;
  metric: MetricId;
  dhat: number; // server value, undisplayed precision
}

export function tooltipInfo(layout: LayoutResponse, hit: CellHit): TooltipInfo {
  return {
    rowEntity: layout.entity_order[hit.row],
    colEntity: layout.entity_order[hit.col],
    metric: layout.metric_order[hit.slot],
    dhat: layout.dhat[hit.row][hit.col][hit.slot],
  };
}

// Group index ranges [start, end) along the displayed order, derived
// from the boundary positions.
export function groupRanges(layout: LayoutResponse): [number, number][] {
  const p = layout.entity_order.length;
  const cuts = [0, ...layout.group_boundaries, p];
  const out: [number, number][] = [];
  for (let i = 0; i < cuts.length - 1; i++) {
    out.push([cuts[i], cuts[i + 1]]);
  }
  return out;
}

export function groupEntities(
  layout: LayoutResponse,
  groupIndex: number,
): Set<string> {
  const ranges = groupRanges(layout);
  if (groupIndex < 0 || groupIndex >= ranges.length) {
    throw new Error(`no group ${groupIndex}`);
  }
  const [start, end] = ranges[groupIndex];
  return new Set(layout.entity_order.slice(start, end));
}

export function groupAt(layout: LayoutResponse, row: number): number {
  const ranges = groupRanges(layout);
  for (let i = 0; i < ranges.length; i++) {
    if (row >= ranges[i][0] && row < ranges[i][1]) return i;
  }
  throw new Error(`row ${row} outside the matrix`);
}

export interface OverlayPoint {
  x: number;
  y: number;
  r: number;
  fill: string;
  fixation: FixationOut;
}

// Scanpath overlay: circles scaled by duration, colored on a green (first)
// to blue (last) temporal ramp.
export function scanpathOverlay(
  scanpath: ScanpathResponse,
  rScale = 0.08,
): OverlayPoint[] {
  const n = scanpath.fixations.length;
  return scanpath.fixations.map((fixation, i) => ({
    x: fixation.x,
    y: fixation.y,
    r: Math.max(2, fixation.duration_ms * rScale),
    fill: temporalColor(i, n),
    fixation,
  }));
}
