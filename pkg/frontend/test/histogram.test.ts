import assert from "node:assert/strict";
import { test } from "node:test";

import { buildHistogram, freedmanDiaconisBins, histogramArea } from "../src/histogram";

function lcg(seed: number): () => number {
  let s = seed >>> 0;
  return () => {
    s = (s * 1664525 + 1013904223) >>> 0;
    return s / 0x100000000;
  };
}

test("bar areas sum to 1 within 1e-6", () => {
  const rand = lcg(42);
  const values = Array.from({ length: 5000 }, () => rand() ** 2 * 3.0);
  for (const bins of [undefined, 10, 40, 128]) {
    const bars = buildHistogram(values, bins);
    assert.ok(Math.abs(histogramArea(bars) - 1) <= 1e-6);
  }
});

test("counts respect sample placement", () => {
  const bars = buildHistogram([0, 0.1, 0.9, 1.0], 2);
  assert.equal(bars.length, 2);
  // two samples per half, width 0.5: height = 2 / (4 * 0.5) = 1
  assert.equal(bars[0].height, 1);
  assert.equal(bars[1].height, 1);
});

test("maximum lands in the last bin", () => {
  const bars = buildHistogram([0, 1, 2, 3, 4], 4);
  const last = bars[bars.length - 1];
  assert.ok(last.height > 0);
});

test("freedman-diaconis stays in [8, 256]", () => {
  const rand = lcg(7);
  const small = Array.from({ length: 20 }, () => rand());
  const big = Array.from({ length: 200000 }, () => rand());
  assert.ok(freedmanDiaconisBins(small) >= 8);
  assert.ok(freedmanDiaconisBins(big) <= 256);
});

test("degenerate one-point sample still has unit area", () => {
  const bars = buildHistogram([2.5, 2.5, 2.5]);
  assert.ok(Math.abs(histogramArea(bars) - 1) <= 1e-6);
});

test("empty sample rejected", () => {
  assert.throws(() => buildHistogram([]), /empty/);
});

test("bad bin count rejected", () => {
  assert.throws(() => buildHistogram([1, 2, 3], 0));
  assert.throws(() => buildHistogram([1, 2, 3], 2.5));
});
