/**
 * Group-by aggregation over trial rows, mirroring the CLI's serial
 * arithmetic exactly (plain left-to-right sums, sorted-midpoint medians) so
 * plotted values match the emitted aggregate CSVs to the last digit.
 */

import { TrialRow } from "./schema";

export interface SeriesPoint {
  x: number;
  y: number;
}

export interface Series {
  name: string;
  points: SeriesPoint[];
}

export function serialMean(values: number[]): number {
  let total = 0;
  for (const v of values) {
    total += v;
  }
  return total / values.length;
}

export function serialMedian(values: number[]): number {
  const ordered = [...values].sort((a, b) => a - b);
  const mid = Math.floor(ordered.length / 2);
  if (ordered.length % 2 === 1) {
    return ordered[mid];
  }
  return (ordered[mid - 1] + ordered[mid]) / 2;
}

function groupValues(
  rows: TrialRow[],
  xOf: (r: TrialRow) => number,
  valueOf: (r: TrialRow) => number,
): Map<string, Map<number, number[]>> {
  const bySelector = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    let xs = bySelector.get(row.selector);
    if (!xs) {
      xs = new Map();
      bySelector.set(row.selector, xs);
    }
    const x = xOf(row);
    let values = xs.get(x);
    if (!values) {
      values = [];
      xs.set(x, values);
    }
    values.push(valueOf(row));
  }
  return bySelector;
}

function toSeries(
  grouped: Map<string, Map<number, number[]>>,
  reduce: (values: number[]) => number,
): Series[] {
  const series: Series[] = [];
  for (const [name, xs] of grouped) {
    const points = [...xs.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, values]) => ({ x, y: reduce(values) }));
    series.push({ name, points });
  }
  series.sort((a, b) => a.name.localeCompare(b.name));
  return series;
}

/** Recovery rate (successes / trials) per selector against m. */
export function recoveryRateSeries(rows: TrialRow[]): Series[] {
  return toSeries(
    groupValues(rows, (r) => r.m, (r) => r.success),
    serialMean,
  );
}

/** Median relative error per selector against sigma. */
export function errorVsSigmaSeries(rows: TrialRow[]): Series[] {
  return toSeries(
    groupValues(rows, (r) => r.sigma, (r) => r.rel_error),
    serialMedian,
  );
}

/** Median squared relative error per selector against k. */
export function errorVsKSeries(rows: TrialRow[]): Series[] {
  return toSeries(
    groupValues(rows, (r) => r.k, (r) => r.rel_error ** 2),
    serialMedian,
  );
}
