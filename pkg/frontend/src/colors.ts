// Client-side color helpers for the parallel-coordinates view only.
// Matrix cell colors always come from the server layout verbatim.

export function hexToRgb(hex: string): [number, number, number] {
  const h = hex.replace("#", "");
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

export function rgbToHex(rgb: [number, number, number]): string {
  return (
    "#" +
    rgb
      .map((c) => Math.round(Math.max(0, Math.min(255, c))).toString(16).padStart(2, "0"))
      .join("")
  );
}

export function lerpColor(a: string, b: string, t: number): string {
  const ca = hexToRgb(a);
  const cb = hexToRgb(b);
  const u = Math.max(0, Math.min(1, t));
  return rgbToHex([
    ca[0] + (cb[0] - ca[0]) * u,
    ca[1] + (cb[1] - ca[1]) * u,
    ca[2] + (cb[2] - ca[2]) * u,
  ]);
}

export const RAMP_START = "#c6dbef";
export const RAMP_END = "#08306b";

// Continuous mode: sequential ramp over the normalized axis value.
export function sequentialColor(t: number): string {
  return lerpColor(RAMP_START, RAMP_END, t);
}

export const CATEGORICAL = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
];

// Discrete mode: one palette entry per server-assigned cluster label.
export function categoricalColor(label: number): string {
  return CATEGORICAL[((label % CATEGORICAL.length) + CATEGORICAL.length) % CATEGORICAL.length];
}

export const SCANPATH_START = "#2ca02c"; // first fixation: green
export const SCANPATH_END = "#1f77b4"; // last fixation: blue

// Temporal ramp for the scanpath overlay.
export function temporalColor(index: number, count: number): string {
  const t = count <= 1 ? 0 : index / (count - 1);
  return lerpColor(SCANPATH_START, SCANPATH_END, t);
}
