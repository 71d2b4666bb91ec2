/**
 * Figure-reproduction acceptance: drive the simulator CLI through its
 * file interface, then render the radial-law panels (four (d, gamma)
 * cells) and the velocity-component panels (d=3, four gammas).
 *
 * Requires the Python package to be installed (`pip install -e ..`);
 * set PYTHON to override the interpreter.
 */

import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { main } from "../src/cli";
import { render } from "../src/figure";
import { decodePng } from "./png.test";

const PYTHON = process.env.PYTHON ?? "python3";
const N_PATHS = "400";

function runSim(args: string[]): void {
  const proc = spawnSync(PYTHON, ["-m", "massshell.cli", ...args],
                         { encoding: "utf-8", timeout: 600000 });
  assert.equal(proc.status, 0,
               `simulator CLI failed: ${proc.stderr || proc.stdout || proc.error}`);
}

interface Panel {
  tag: string;
  d: string;
  gamma: string;
  observable: string;
}

const RADIAL_PANELS: Panel[] = [
  { tag: "radial-d2-g4", d: "2", gamma: "4", observable: "s" },
  { tag: "radial-d3-g4", d: "3", gamma: "4", observable: "s" },
  { tag: "radial-d3-g10", d: "3", gamma: "10", observable: "s" },
  { tag: "radial-d4-g7", d: "4", gamma: "7", observable: "s" },
];

const VELOCITY_PANELS: Panel[] = [4, 6, 8, 10].map((g) => ({
  tag: `v2-d3-g${g}`, d: "3", gamma: String(g), observable: "v2",
}));

test("figure panels render from simulator CLI outputs", () => {
  const dir = mkdtempSync(join(tmpdir(), "msfig-acc-"));
  for (const panel of [...RADIAL_PANELS, ...VELOCITY_PANELS]) {
    const samples = join(dir, `${panel.tag}-samples.csv`);
    const density = join(dir, `${panel.tag}-density.csv`);
    const out = join(dir, `${panel.tag}.png`);
    runSim(["simulate", "--d", panel.d, "--gamma", panel.gamma,
            "--n-paths", N_PATHS, "--t-end", "100", "--base-seed", "3",
            "--observable", panel.observable, "--out", samples]);
    runSim(["densities", "--d", panel.d, "--gamma", panel.gamma,
            "--observable", panel.observable, "--out", density]);

    const result = render({
      samplesCsv: samples,
      densityCsv: density,
      title: `d=${panel.d}, gamma=${panel.gamma}`,
    });
    assert.ok(result.histogramArea !== null);
    assert.ok(Math.abs(result.histogramArea! - 1) <= 1e-6,
              `${panel.tag}: histogram area ${result.histogramArea}`);
    assert.equal(result.nSamples, Number(N_PATHS));

    const rc = main(["render", "--samples", samples, "--density", density,
                     "--out", out, "--title", `d=${panel.d}, gamma=${panel.gamma}`]);
    assert.equal(rc, 0, `${panel.tag}: render CLI failed`);
    const img = decodePng(readFileSync(out));
    assert.equal(img.width, 640);
    assert.equal(img.height, 480);
    console.log(`ACCEPTANCE A9 ${panel.tag}: rendered, histogram area ` +
                `${result.histogramArea!.toFixed(9)} -> PASS`);
  }
});
