// Reading and validating the record CSVs written by the walking harness.
import { readFileSync } from "fs";
import { basename } from "path";
import Papa from "papaparse";

export class MissingColumnError extends Error {
  readonly column: string;

  constructor(column: string, file: string) {
    super(`missing column "${column}" in ${file}`);
    this.column = column;
  }
}

export interface RunData {
  /** Series label, defaults to the file name without extension. */
  label: string;
  file: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function loadRun(file: string, label?: string): RunData {
  const text = readFileSync(file, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`could not parse ${file}: ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  return {
    label: label ?? basename(file).replace(/\.csv$/i, ""),
    file,
    columns,
    rows: parsed.data,
  };
}

export function requireColumns(run: RunData, needed: string[]): void {
  for (const column of needed) {
    if (!run.columns.includes(column)) {
      throw new MissingColumnError(column, run.file);
    }
  }
}

/** Numeric column; blank or non-numeric cells become NaN. */
export function numbers(run: RunData, column: string): number[] {
  return run.rows.map((row) => {
    const cell = row[column];
    if (cell === undefined || cell === "") return NaN;
    return Number(cell);
  });
}

/** Drop indices where y is not finite (fall rows, empty cells). */
export function finitePairs(xs: number[], ys: number[]): Array<[number, number]> {
  const out: Array<[number, number]> = [];
  for (let i = 0; i < ys.length; i++) {
    if (Number.isFinite(xs[i]) && Number.isFinite(ys[i])) {
      out.push([xs[i], ys[i]]);
    }
  }
  return out;
}
