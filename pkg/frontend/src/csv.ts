/**
 * Strict readers for the simulation tool's CSV and JSON outputs.
 *
 * Every reader fails loudly: a missing column is reported by name, a
 * malformed row by its 1-based line number. Files are only ever read,
 * never written or modified.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class InputError extends Error {}

export interface SweepRow {
  index: number;
  cooperativity: number;
  concurrence: number;
  error: string;
}

export interface Trajectory {
  t: number[];
  re: number[];
  im: number[];
}

export interface EigenTable {
  t: number[];
  /** columns lambda_00, lambda_01, lambda_10, lambda_11 in that order */
  lambda: number[][];
}

export interface Metadata {
  configHash: string;
}

interface RawTable {
  header: string[];
  rows: string[][];
}

function parseTable(path: string): RawTable {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<string[]>(text.trim(), { delimiter: "," });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    const line = (first.row ?? 0) + 1;
    throw new InputError(`${path}: malformed CSV at line ${line}: ${first.message}`);
  }
  const data = parsed.data;
  if (data.length < 1) {
    throw new InputError(`${path}: empty CSV`);
  }
  const header = data[0];
  const rows = data.slice(1);
  rows.forEach((row, i) => {
    if (row.length !== header.length) {
      throw new InputError(
        `${path}: malformed CSV at line ${i + 2}: expected ` +
          `${header.length} fields, found ${row.length}`,
      );
    }
  });
  return { header, rows };
}

function columnIndex(table: RawTable, name: string, path: string): number {
  const i = table.header.indexOf(name);
  if (i < 0) {
    throw new InputError(`${path}: missing required column "${name}"`);
  }
  return i;
}

function numberAt(row: string[], col: number, line: number, path: string): number {
  const value = Number(row[col]);
  if (!Number.isFinite(value) && row[col].toLowerCase() !== "nan") {
    throw new InputError(`${path}: malformed CSV at line ${line}: "${row[col]}" is not a number`);
  }
  return value;
}

/** Sweep output: requires cooperativity and concurrence columns. */
export function readSweep(path: string): SweepRow[] {
  const table = parseTable(path);
  const iIndex = columnIndex(table, "index", path);
  const iCoop = columnIndex(table, "cooperativity", path);
  const iConc = columnIndex(table, "concurrence", path);
  const iError = columnIndex(table, "error", path);
  return table.rows.map((row, i) => ({
    index: numberAt(row, iIndex, i + 2, path),
    cooperativity: numberAt(row, iCoop, i + 2, path),
    concurrence: numberAt(row, iConc, i + 2, path),
    error: row[iError],
  }));
}

/** Complex trajectory: requires t, re, im columns. */
export function readTrajectory(path: string): Trajectory {
  const table = parseTable(path);
  const iT = columnIndex(table, "t", path);
  const iRe = columnIndex(table, "re", path);
  const iIm = columnIndex(table, "im", path);
  const out: Trajectory = { t: [], re: [], im: [] };
  table.rows.forEach((row, i) => {
    out.t.push(numberAt(row, iT, i + 2, path));
    out.re.push(numberAt(row, iRe, i + 2, path));
    out.im.push(numberAt(row, iIm, i + 2, path));
  });
  return out;
}

const EIGEN_COLUMNS = ["lambda_00", "lambda_01", "lambda_10", "lambda_11"];

/** Eigenvalue table: requires t and the four lambda_jk columns. */
export function readEigen(path: string): EigenTable {
  const table = parseTable(path);
  const iT = columnIndex(table, "t", path);
  const cols = EIGEN_COLUMNS.map((name) => columnIndex(table, name, path));
  const out: EigenTable = { t: [], lambda: [[], [], [], []] };
  table.rows.forEach((row, i) => {
    out.t.push(numberAt(row, iT, i + 2, path));
    cols.forEach((c, k) => out.lambda[k].push(numberAt(row, c, i + 2, path)));
  });
  return out;
}

/** Metadata sidecar (sweep --meta) or run report (simulate --out). */
export function readMetadata(path: string): Metadata {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf-8"));
  } catch (exc) {
    throw new InputError(`${path}: not valid JSON: ${(exc as Error).message}`);
  }
  const hash = (parsed as Record<string, unknown>)?.config_hash;
  if (typeof hash !== "string" || hash.length === 0) {
    throw new InputError(`${path}: missing required field "config_hash"`);
  }
  return { configHash: hash };
}
