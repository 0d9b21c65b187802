// Weight-panel draft validation. The commit button stays disabled until
// the draft is an affine combination: known metrics, weights in [0, 1],
// at least one positive, sum within 1e-9 of 1.

import type { MetricId } from "./types.js";

export const SUM_TOLERANCE = 1e-9;

export interface DraftCheck {
  ok: boolean;
  total: number;
  errors: string[];
}

export function validateDraft(
  draft: Record<MetricId, number>,
  knownMetrics: readonly MetricId[],
): DraftCheck {
  const errors: string[] = [];
  const known = new Set(knownMetrics);
  let total = 0;
  let positive = 0;
  for (const [metric, w] of Object.entries(draft)) {
    if (!known.has(metric)) errors.push(`unknown metric ${metric}`);
    if (!Number.isFinite(w) || w < 0 || w > 1) {
      errors.push(`weight for ${metric} must be in [0, 1]`);
      continue;
    }
    total += w;
    if (w > 0) positive++;
  }
  if (positive === 0) errors.push("select at least one metric");
  if (Math.abs(total - 1) > SUM_TOLERANCE && positive > 0) {
    errors.push(`weights sum to ${formatWeight(total)}, need 1`);
  }
  return { ok: errors.length === 0, total, errors };
}

// Display rounding only; committed and compared values stay full precision.
export function formatWeight(v: number): string {
  return v.toFixed(3);
}

export function formatAxisValue(v: number): string {
  return v.toFixed(4);
}

// Cleaned draft for the POST body: zero weights dropped.
export function draftToRequest(
  draft: Record<MetricId, number>,
): Record<MetricId, number> {
  const out: Record<MetricId, number> = {};
  for (const [metric, w] of Object.entries(draft)) {
    if (w > 0) out[metric] = w;
  }
  return out;
}
