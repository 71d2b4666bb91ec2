/**
 * Readers for the simulator's CSV outputs.
 *
 * Samples file:  header `path_id,t,value`, one numeric triple per row.
 * Density file:  header `x,density`, one numeric pair per row.
 *
 * Schema violations raise CsvError carrying the 1-based offending line.
 */

import { readFileSync } from "node:fs";

export class CsvError extends Error {
  constructor(public file: string, public line: number, message: string) {
    super(`${file}:${line}: ${message}`);
  }
}

function splitLines(file: string, text: string): string[] {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1].trim() === "") lines.pop();
  if (lines.length === 0) throw new CsvError(file, 1, "empty file");
  return lines;
}

function parseNumeric(file: string, lineNo: number, field: string): number {
  const v = Number(field);
  if (field.trim() === "" || !Number.isFinite(v)) {
    throw new CsvError(file, lineNo, `expected a finite number, got ${JSON.stringify(field)}`);
  }
  return v;
}

export interface SampleRow {
  pathId: number;
  t: number;
  value: number;
}

export function readSamplesCsv(file: string): SampleRow[] {
  const lines = splitLines(file, readFileSync(file, "utf-8"));
  if (lines[0].trim() !== "path_id,t,value") {
    throw new CsvError(file, 1, `expected header "path_id,t,value", got ${JSON.stringify(lines[0])}`);
  }
  const rows: SampleRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 3) {
      throw new CsvError(file, i + 1, `expected 3 fields, got ${parts.length}`);
    }
    rows.push({
      pathId: parseNumeric(file, i + 1, parts[0]),
      t: parseNumeric(file, i + 1, parts[1]),
      value: parseNumeric(file, i + 1, parts[2]),
    });
  }
  if (rows.length === 0) throw new CsvError(file, 2, "no sample rows");
  return rows;
}

export interface DensityPoint {
  x: number;
  density: number;
}

export function readDensityCsv(file: string): DensityPoint[] {
  const lines = splitLines(file, readFileSync(file, "utf-8"));
  if (lines[0].trim() !== "x,density") {
    throw new CsvError(file, 1, `expected header "x,density", got ${JSON.stringify(lines[0])}`);
  }
  const points: DensityPoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 2) {
      throw new CsvError(file, i + 1, `expected 2 fields, got ${parts.length}`);
    }
    points.push({
      x: parseNumeric(file, i + 1, parts[0]),
      density: parseNumeric(file, i + 1, parts[1]),
    });
  }
  if (points.length < 2) throw new CsvError(file, 2, "need at least 2 density points");
  for (let i = 1; i < points.length; i++) {
    if (points[i].x <= points[i - 1].x) {
      throw new CsvError(file, i + 2, "x grid must be strictly increasing");
    }
  }
  return points;
}
