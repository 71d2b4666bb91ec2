/** Unit-area histogram of sample values. */

export interface HistogramBar {
  x0: number;
  x1: number;
  height: number; // count / (n * width): bar areas sum to 1
}

export function freedmanDiaconisBins(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const q = (p: number) => {
    const idx = p * (sorted.length - 1);
    const lo = Math.floor(idx);
    const hi = Math.ceil(idx);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (idx - lo);
  };
  const iqr = q(0.75) - q(0.25);
  const range = sorted[sorted.length - 1] - sorted[0];
  if (iqr <= 0 || range <= 0) return 8;
  const width = (2 * iqr) / Math.cbrt(values.length);
  return Math.min(256, Math.max(8, Math.ceil(range / width)));
}

export function buildHistogram(values: number[], bins?: number): HistogramBar[] {
  if (values.length === 0) throw new Error("cannot histogram an empty sample");
  const n = bins ?? freedmanDiaconisBins(values);
  if (n < 1 || !Number.isInteger(n)) throw new Error(`bin count must be a positive integer, got ${n}`);
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min === max) {
    // degenerate sample: one bar of unit area around the point; the
    // height uses the realized float width so the area is exactly 1
    const w = Math.max(1e-12, Math.abs(min) * 1e-12 + 1e-12);
    const x0 = min - w / 2;
    const x1 = min + w / 2;
    return [{ x0, x1, height: 1 / (x1 - x0) }];
  }
  const width = (max - min) / n;
  const counts = new Array<number>(n).fill(0);
  for (const v of values) {
    let idx = Math.floor((v - min) / width);
    if (idx >= n) idx = n - 1; // max lands in the last bin
    counts[idx] += 1;
  }
  return counts.map((c, i) => ({
    x0: min + i * width,
    x1: min + (i + 1) * width,
    height: c / (values.length * width),
  }));
}

export function histogramArea(bars: HistogramBar[]): number {
  return bars.reduce((acc, b) => acc + b.height * (b.x1 - b.x0), 0);
}
