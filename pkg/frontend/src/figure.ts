/**
 * Figure assembly: pick the aggregation for a figure kind, validate the
 * columns it needs, and render the SVG.
 */

import {
  errorVsKSeries,
  errorVsSigmaSeries,
  recoveryRateSeries,
  Series,
} from "./aggregate";
import { parseTrialCsv, SchemaError, TrialRow } from "./schema";
import { renderLineChart } from "./svg";

export type FigureKind = "recovery-rate" | "error-vs-k" | "error-vs-sigma";

export const FIGURE_KINDS: FigureKind[] = [
  "recovery-rate",
  "error-vs-k",
  "error-vs-sigma",
];

export interface FigureSpec {
  kind: FigureKind;
  inputCsv: string;
  outputPath: string;
}

interface KindConfig {
  aggregate: (rows: TrialRow[]) => Series[];
  xLabel: string;
  yLabel: string;
  title: string;
}

const KINDS: Record<FigureKind, KindConfig> = {
  "recovery-rate": {
    aggregate: recoveryRateSeries,
    xLabel: "measurements m",
    yLabel: "recovery rate",
    title: "Recovery rate vs number of measurements",
  },
  "error-vs-k": {
    aggregate: errorVsKSeries,
    xLabel: "block sparsity k",
    yLabel: "median squared relative error",
    title: "Squared error vs block sparsity",
  },
  "error-vs-sigma": {
    aggregate: errorVsSigmaSeries,
    xLabel: "noise level sigma",
    yLabel: "median relative error",
    title: "Recovery error vs noise level",
  },
};

export function figureSeries(kind: FigureKind, rows: TrialRow[]): Series[] {
  if (rows.length === 0) {
    throw new SchemaError("no trial rows to aggregate");
  }
  return KINDS[kind].aggregate(rows);
}

export function renderFigure(kind: FigureKind, csvText: string): string {
  if (!(kind in KINDS)) {
    throw new SchemaError(`unknown figure kind: ${kind}`);
  }
  const rows = parseTrialCsv(csvText);
  const series = figureSeries(kind, rows);
  const config = KINDS[kind];
  return renderLineChart(series, {
    title: config.title,
    xLabel: config.xLabel,
    yLabel: config.yLabel,
  });
}
