/**
 * Figure assembly: normalized sample histogram (blue) overlaid with the
 * closed-form density curve (red), axes with tick labels, and a title.
 * Output is a deterministic PNG byte buffer for fixed inputs.
 */

import { DensityPoint, SampleRow, readDensityCsv, readSamplesCsv } from "./csv";
import { HistogramBar, buildHistogram, histogramArea } from "./histogram";
import { encodePng } from "./png";
import {
  BLACK, DENSITY_RED, GRID_GRAY, HIST_BLUE, HIST_BLUE_EDGE, Raster, textWidth,
} from "./raster";

export interface FigureSpec {
  samplesCsv?: string;
  densityCsv?: string;
  title?: string;
  bins?: number;
}

export interface RenderResult {
  png: Buffer;
  histogramArea: number | null;
  nSamples: number;
  nDensityPoints: number;
}

const WIDTH = 640;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 20, top: 32, bottom: 44 };

function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= step0) { step = mag * mult; break; }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(0).replace("e+", "E").replace("e-", "E-");
  const s = v.toPrecision(3);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

export function render(spec: FigureSpec): RenderResult {
  if (!spec.samplesCsv && !spec.densityCsv) {
    throw new Error("nothing to render: need a samples file, a density file, or both");
  }
  let samples: SampleRow[] = [];
  let bars: HistogramBar[] = [];
  if (spec.samplesCsv) {
    samples = readSamplesCsv(spec.samplesCsv);
    bars = buildHistogram(samples.map((r) => r.value), spec.bins);
  }
  let density: DensityPoint[] = [];
  if (spec.densityCsv) {
    density = readDensityCsv(spec.densityCsv);
  }

  let xLo = Infinity;
  let xHi = -Infinity;
  let yHi = 0;
  for (const b of bars) {
    xLo = Math.min(xLo, b.x0);
    xHi = Math.max(xHi, b.x1);
    yHi = Math.max(yHi, b.height);
  }
  for (const p of density) {
    xLo = Math.min(xLo, p.x);
    xHi = Math.max(xHi, p.x);
    yHi = Math.max(yHi, p.density);
  }
  if (!(xHi > xLo)) { xLo -= 0.5; xHi += 0.5; }
  if (yHi <= 0) yHi = 1;
  yHi *= 1.06;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - (y / yHi) * plotH;

  const img = new Raster(WIDTH, HEIGHT);

  const xTicks = niceTicks(xLo, xHi);
  const yTicks = niceTicks(0, yHi);
  for (const t of xTicks) {
    img.line(Math.round(px(t)), MARGIN.top, Math.round(px(t)), MARGIN.top + plotH, GRID_GRAY);
  }
  for (const t of yTicks) {
    img.line(MARGIN.left, Math.round(py(t)), MARGIN.left + plotW, Math.round(py(t)), GRID_GRAY);
  }

  for (const b of bars) {
    const x0 = Math.round(px(b.x0));
    const x1 = Math.round(px(b.x1));
    const y0 = Math.round(py(b.height));
    const y1 = MARGIN.top + plotH - 1;
    if (y0 <= y1) {
      img.fillRect(x0, y0, x1, y1, HIST_BLUE);
      img.line(x0, y0, x1, y0, HIST_BLUE_EDGE);
      img.line(x0, y0, x0, y1, HIST_BLUE_EDGE);
      img.line(x1, y0, x1, y1, HIST_BLUE_EDGE);
    }
  }

  for (let i = 1; i < density.length; i++) {
    img.line(px(density[i - 1].x), py(Math.min(density[i - 1].density, yHi)),
             px(density[i].x), py(Math.min(density[i].density, yHi)),
             DENSITY_RED, 2);
  }

  // frame
  img.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, BLACK);
  img.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);
  img.line(MARGIN.left + plotW, MARGIN.top, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);
  img.line(MARGIN.left, MARGIN.top, MARGIN.left + plotW, MARGIN.top, BLACK);

  for (const t of xTicks) {
    const x = Math.round(px(t));
    img.line(x, MARGIN.top + plotH, x, MARGIN.top + plotH + 4, BLACK);
    const label = fmtTick(t);
    img.text(x - Math.floor(textWidth(label) / 2), MARGIN.top + plotH + 8, label, BLACK);
  }
  for (const t of yTicks) {
    const y = Math.round(py(t));
    img.line(MARGIN.left - 4, y, MARGIN.left, y, BLACK);
    const label = fmtTick(t);
    img.text(MARGIN.left - 8 - textWidth(label), y - 3, label, BLACK);
  }

  if (spec.title) {
    const scale = 2;
    img.text(Math.round(WIDTH / 2 - textWidth(spec.title, scale) / 2), 8,
             spec.title, BLACK, scale);
  }
  img.text(WIDTH - MARGIN.right - textWidth("VALUE"), HEIGHT - 12, "VALUE", BLACK);
  img.text(4, MARGIN.top - 10, "DENSITY", BLACK);

  return {
    png: encodePng(WIDTH, HEIGHT, img.pixels),
    histogramArea: bars.length > 0 ? histogramArea(bars) : null,
    nSamples: samples.length,
    nDensityPoints: density.length,
  };
}
