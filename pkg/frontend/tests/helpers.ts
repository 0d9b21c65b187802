// Shared test utilities: fixture loading and a deterministic RNG.
//
// The JSON fixtures are verbatim service responses captured from a
// 40-entity synthetic dataset (weights CompTime=0.7, ScanLen=0.3, k=2),
// so tests compare client behavior against real server output.

import { readFileSync } from "node:fs";
import type {
  ClusterResponse,
  LayoutResponse,
  MetricsResponse,
  ScanpathResponse,
} from "../src/types.js";

function load<T>(name: string): T {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8")) as T;
}

export const loadMetrics = (): MetricsResponse => load("metrics");
export const loadCluster = (): ClusterResponse => load("cluster");
export const loadMatrix = (): LayoutResponse => load("matrix");
export const loadMatrixDefault = (): LayoutResponse => load("matrix_default");
export const loadScanpath = (): ScanpathResponse => load("scanpath");

// Small deterministic RNG (mulberry32) so randomized cases replay exactly.
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

// Parse an SVG path "M x y L x y ..." back into points.
export function pathPoints(path: string): { x: number; y: number }[] {
  const out: { x: number; y: number }[] = [];
  const tokens = path.split(/[ML]/).map((s) => s.trim()).filter(Boolean);
  for (const token of tokens) {
    const [x, y] = token.split(/\s+/).map(Number);
    out.push({ x, y });
  }
  return out;
}
