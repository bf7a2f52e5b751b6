/**
 * Trial-record CSV schema shared with the benchmark CLI: fixed column
 * order, one row per solver trial.
 */

import Papa from "papaparse";

export const TRIAL_COLUMNS = [
  "experiment_id", "trial", "m", "d", "n", "k", "B", "selector", "epsilon",
  "sigma", "seed", "iterations", "halt_reason", "rel_error", "success",
  "wall_ms",
] as const;

export interface TrialRow {
  experiment_id: string;
  trial: number;
  m: number;
  d: number;
  n: number;
  k: number;
  B: number;
  selector: string;
  epsilon: number | null;
  sigma: number;
  seed: string;
  iterations: number;
  halt_reason: string;
  rel_error: number;
  success: number;
  wall_ms: number;
}

export class SchemaError extends Error {}

/** Columns a figure kind needs beyond the base identification columns. */
export const REQUIRED_BY_KIND: Record<string, string[]> = {
  "recovery-rate": ["m", "selector", "success"],
  "error-vs-k": ["k", "selector", "rel_error"],
  "error-vs-sigma": ["sigma", "selector", "rel_error"],
};

export function parseTrialCsv(text: string): TrialRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse failed: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = rows[0];
  for (const column of TRIAL_COLUMNS) {
    if (!header.includes(column)) {
      throw new SchemaError(`missing column: ${column}`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const at = (row: string[], name: string) => row[index.get(name)!];
  const num = (row: string[], name: string) => Number(at(row, name));

  return rows.slice(1).map((row) => ({
    experiment_id: at(row, "experiment_id"),
    trial: num(row, "trial"),
    m: num(row, "m"),
    d: num(row, "d"),
    n: num(row, "n"),
    k: num(row, "k"),
    B: num(row, "B"),
    selector: at(row, "selector"),
    epsilon: at(row, "epsilon") === "" ? null : num(row, "epsilon"),
    sigma: num(row, "sigma"),
    seed: at(row, "seed"),
    iterations: num(row, "iterations"),
    halt_reason: at(row, "halt_reason"),
    rel_error: num(row, "rel_error"),
    success: num(row, "success"),
    wall_ms: num(row, "wall_ms"),
  }));
}
