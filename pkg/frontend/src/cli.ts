#!/usr/bin/env node
/**
 * render --samples FILE --density FILE --out FILE [--bins N] [--title S]
 *
 * Either of --samples / --density may be omitted (curve-only or
 * histogram-only panel); --out is required.  Exits 2 on usage errors and
 * 1 on input-schema or render failures, reporting the offending line.
 */

import { writeFileSync } from "node:fs";
import { CsvError } from "./csv";
import { render } from "./figure";

interface Args {
  samples?: string;
  density?: string;
  out?: string;
  bins?: number;
  title?: string;
}

function parseArgs(argv: string[]): Args {
  if (argv.length === 0 || argv[0] !== "render") {
    throw new UsageError("expected the 'render' subcommand");
  }
  const args: Args = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new UsageError(`missing value for ${flag}`);
    switch (flag) {
      case "--samples": args.samples = value; break;
      case "--density": args.density = value; break;
      case "--out": args.out = value; break;
      case "--title": args.title = value; break;
      case "--bins": {
        const n = Number(value);
        if (!Number.isInteger(n) || n < 1) throw new UsageError(`--bins must be a positive integer, got ${value}`);
        args.bins = n;
        break;
      }
      default:
        throw new UsageError(`unknown flag ${flag}`);
    }
  }
  if (!args.out) throw new UsageError("--out is required");
  if (!args.samples && !args.density) {
    throw new UsageError("need --samples and/or --density");
  }
  return args;
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const result = render({
      samplesCsv: args.samples,
      densityCsv: args.density,
      bins: args.bins,
      title: args.title,
    });
    writeFileSync(args.out!, result.png);
    const area = result.histogramArea === null ? "none" : result.histogramArea.toFixed(9);
    console.log(
      `wrote ${args.out}: ${result.nSamples} samples, ` +
      `${result.nDensityPoints} density points, histogram area ${area}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`input error: ${err.message}`);
    } else {
      console.error(`render error: ${(err as Error).message}`);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
