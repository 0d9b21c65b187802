// Polyline and curve geometry for the parallel-coordinates scene.
//
// Curves are per-interval cubic Hermite segments in (x, y) with x as the
// parameter. Knot tangents blend between the interval secant (straight
// line) and Fritsch-Carlson monotone tangents, so smoothing 0 reproduces
// the polyline exactly and smoothing 1 gives a monotone spline that
// never overshoots the knot values.

export interface Point {
  x: number;
  y: number;
}

export function axisScale(
  domain: [number, number],
  height: number,
  inverted: boolean,
): (v: number) => number {
  const [lo, hi] = domain;
  return (v) => {
    const t = hi === lo ? 0.5 : (v - lo) / (hi - lo);
    const up = inverted ? t : 1 - t; // y grows downward in screen space
    return up * height;
  };
}

// Fritsch-Carlson limited tangents; interior tangents are zero at local
// extrema, which is what prevents overshoot.
export function monotoneTangents(knots: Point[]): number[] {
  const n = knots.length;
  if (n < 2) return new Array(n).fill(0);
  const dx: number[] = [];
  const slope: number[] = [];
  for (let i = 0; i < n - 1; i++) {
    dx.push(knots[i + 1].x - knots[i].x);
    slope.push((knots[i + 1].y - knots[i].y) / (knots[i + 1].x - knots[i].x));
  }
  const m = new Array(n).fill(0);
  m[0] = slope[0];
  m[n - 1] = slope[n - 2];
  for (let i = 1; i < n - 1; i++) {
    if (slope[i - 1] * slope[i] <= 0) {
      m[i] = 0;
    } else {
      const w1 = 2 * dx[i] + dx[i - 1];
      const w2 = dx[i] + 2 * dx[i - 1];
      m[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  return m;
}

function hermite(
  x: number,
  x0: number,
  x1: number,
  y0: number,
  y1: number,
  m0: number,
  m1: number,
): number {
  const h = x1 - x0;
  const t = (x - x0) / h;
  const t2 = t * t;
  const t3 = t2 * t;
  return (
    (2 * t3 - 3 * t2 + 1) * y0 +
    (t3 - 2 * t2 + t) * h * m0 +
    (-2 * t3 + 3 * t2) * y1 +
    (t3 - t2) * h * m1
  );
}

// Evaluate the smoothed curve at x. Knots must be strictly increasing in x.
export function evalCurve(knots: Point[], smoothing: number, x: number): number {
  if (knots.length === 0) throw new Error("no knots");
  if (knots.length === 1) return knots[0].y;
  const tangents = monotoneTangents(knots);
  let i = knots.length - 2;
  for (let j = 0; j < knots.length - 1; j++) {
    if (x <= knots[j + 1].x) {
      i = j;
      break;
    }
  }
  const secant =
    (knots[i + 1].y - knots[i].y) / (knots[i + 1].x - knots[i].x);
  const m0 = secant + smoothing * (tangents[i] - secant);
  const m1 = secant + smoothing * (tangents[i + 1] - secant);
  return hermite(x, knots[i].x, knots[i + 1].x, knots[i].y, knots[i + 1].y, m0, m1);
}

export function sampleCurve(
  knots: Point[],
  smoothing: number,
  perSegment = 16,
): Point[] {
  const out: Point[] = [];
  for (let i = 0; i < knots.length - 1; i++) {
    for (let s = 0; s < perSegment; s++) {
      const x =
        knots[i].x + ((knots[i + 1].x - knots[i].x) * s) / perSegment;
      out.push({ x, y: evalCurve(knots, smoothing, x) });
    }
  }
  if (knots.length > 0) out.push(knots[knots.length - 1]);
  return out;
}

// Bundling inserts one extra knot midway between neighboring axes whose
// y blends the entity's own straight midpoint toward the group centroid
// polyline's midpoint; tightness 1 lands exactly on the centroid midpoint.
export function bundledKnots(
  knots: Point[],
  centroid: Point[],
  tightness: number,
): Point[] {
  if (tightness <= 0 || knots.length < 2) return knots;
  if (centroid.length !== knots.length) {
    throw new Error("centroid must have one knot per axis");
  }
  const out: Point[] = [];
  for (let i = 0; i < knots.length - 1; i++) {
    out.push(knots[i]);
    const ownMid = (knots[i].y + knots[i + 1].y) / 2;
    const centroidMid = (centroid[i].y + centroid[i + 1].y) / 2;
    out.push({
      x: (knots[i].x + knots[i + 1].x) / 2,
      y: ownMid + tightness * (centroidMid - ownMid),
    });
  }
  out.push(knots[knots.length - 1]);
  return out;
}

export function toPathData(points: Point[]): string {
  if (points.length === 0) return "";
  const parts = [`M ${points[0].x} ${points[0].y}`];
  for (let i = 1; i < points.length; i++) {
    parts.push(`L ${points[i].x} ${points[i].y}`);
  }
  return parts.join(" ");
}
