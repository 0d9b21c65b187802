// Wire types for the gazegroup service JSON API. Field names mirror the
// server responses exactly; the UI never reshapes or recomputes them.

export type MetricId = string;

export interface MetricsResponse {
  session_id: string;
  entities: string[];
  metric_order: MetricId[];
  values: number[][]; // entities x metrics, data units
  normalized: number[][]; // entities x metrics, min-max [0, 1]
  defined_counts: number[][] | null;
  warnings: string[];
}

export interface SessionCreated {
  session_id: string;
  entities: string[];
  n_fixations: number;
  warnings: [number, string][];
}

export interface ClusterRequest {
  weights: Record<MetricId, number>;
  linkage?: "single" | "complete" | "average";
  k?: number | null;
  form?: "weighted_sum" | "euclidean";
}

export type MergeRow = [number, number, number, number]; // left, right, height, size

export interface ClusterResponse {
  key: string;
  linkage: string;
  form: string;
  weights: Record<MetricId, number>;
  merges: MergeRow[];
  leaf_order: number[];
  entity_order: string[];
  entities: string[];
  labels: number[] | null;
  group_boundaries: number[];
  wavg: number[]; // per entity in upload order, same scale as normalized
}

export interface SubgridInfo {
  order: number;
  side: number;
  positions: [number, number][]; // sub-cell (x, y) per metric slot
}

export interface LayoutResponse {
  entity_order: string[];
  leaf_indices: number[];
  metric_order: MetricId[];
  subgrid: SubgridInfo;
  cells: string[][][]; // p x p x n sRGB hex, server-computed
  dhat: number[][][]; // p x p x n normalized distances
  group_boundaries: number[];
  color: {
    chroma: number;
    l_range: [number, number];
    invert_lightness: boolean;
    hues: Record<MetricId, number>;
  };
}

export interface FixationOut {
  x: number;
  y: number;
  onset_ms: number;
  duration_ms: number;
}

export interface ScanpathResponse {
  participant_id: string;
  stimulus_id: string;
  fixations: FixationOut[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
