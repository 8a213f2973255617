/**
 * The three figure kinds built from benchmark rows.
 *
 * compare     naive and fast wall times against the digit target, one pair
 *             of curves per group, log time axis (the spread is exponential)
 * scaling     fast rows alone on a linear time axis, annotated with the
 *             fitted log-log slope
 * multi-genus one fast curve per group, for sweeps of different groups
 */

import { BenchRow, NoDataError } from "./bench.js";
import { ChartSpec, SeriesSpec, renderChart } from "./svg.js";

export type PlotKind = "compare" | "scaling" | "multi-genus";

export interface PlotSpec {
  kind: PlotKind;
  inputs: string[];
  timeScale?: "linear" | "log";
}

const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#9d4edd", "#f77f00", "#118ab2"];

function byM(rows: BenchRow[]): Array<{ x: number; y: number }> {
  return rows
    .slice()
    .sort((a, b) => a.m - b.m)
    .map((r) => ({ x: r.m, y: r.timeNs / 1e6 }));
}

function groupsOf(rows: BenchRow[]): string[] {
  return [...new Set(rows.map((r) => r.group))].sort();
}

/**
 * Least-squares slope of log(time) against log(m) over the largest decade
 * of m present in the rows. Reported on the figure, never a pass/fail.
 */
export function fitLogLogSlope(rows: BenchRow[]): { slope: number; used: number } {
  const maxM = Math.max(...rows.map((r) => r.m));
  const kept = rows.filter((r) => r.m >= maxM / 10);
  const pts = kept.map((r) => [Math.log(r.m), Math.log(r.timeNs)]);
  const distinct = new Set(kept.map((r) => r.m));
  if (distinct.size < 2) {
    throw new NoDataError("slope fit needs at least two distinct digit targets");
  }
  const mx = pts.reduce((a, [x]) => a + x, 0) / pts.length;
  const my = pts.reduce((a, [, y]) => a + y, 0) / pts.length;
  const cov = pts.reduce((a, [x, y]) => a + (x - mx) * (y - my), 0);
  const varx = pts.reduce((a, [x]) => a + (x - mx) ** 2, 0);
  return { slope: cov / varx, used: kept.length };
}

export function compareFigure(rows: BenchRow[], timeScale: "linear" | "log" = "log"): string {
  const series: SeriesSpec[] = [];
  const groups = groupsOf(rows);
  for (const [gi, group] of groups.entries()) {
    for (const algo of ["naive", "fast"] as const) {
      const own = rows.filter((r) => r.group === group && r.algo === algo);
      if (own.length === 0) continue;
      series.push({
        label: groups.length > 1 ? `${group} ${algo}` : algo,
        color: PALETTE[(gi * 2 + (algo === "fast" ? 1 : 0)) % PALETTE.length],
        dash: algo === "naive" ? "5,3" : undefined,
        points: byM(own),
      });
    }
  }
  if (series.length === 0) {
    throw new NoDataError("compare figure needs naive or fast rows");
  }
  const spec: ChartSpec = {
    title: "Theta pairing: word products vs power series",
    subtitle: `groups: ${groups.join(", ")}`,
    xLabel: "requested digits m",
    yLabel: "wall time",
    yScale: timeScale,
    series,
  };
  return renderChart(spec);
}

export function scalingFigure(rows: BenchRow[], timeScale: "linear" | "log" = "linear"): string {
  const fast = rows.filter((r) => r.algo === "fast");
  if (fast.length === 0) {
    throw new NoDataError("scaling figure needs fast rows");
  }
  const { slope, used } = fitLogLogSlope(fast);
  const groups = groupsOf(fast);
  const series: SeriesSpec[] = groups.map((group, i) => ({
    label: `${group} fast`,
    color: PALETTE[(i + 1) % PALETTE.length],
    points: byM(fast.filter((r) => r.group === group)),
  }));
  const spec: ChartSpec = {
    title: "Series algorithm at large precision",
    subtitle: `groups: ${groups.join(", ")}`,
    xLabel: "requested digits m",
    yLabel: "wall time",
    yScale: timeScale,
    series,
    annotations: [
      `fitted log-log slope ${slope.toFixed(2)} over the largest decade (${used} rows)`,
    ],
  };
  return renderChart(spec);
}

export function multiGenusFigure(rows: BenchRow[], timeScale: "linear" | "log" = "log"): string {
  const fast = rows.filter((r) => r.algo === "fast");
  if (fast.length === 0) {
    throw new NoDataError("multi-genus figure needs fast rows");
  }
  const groups = groupsOf(fast);
  const series: SeriesSpec[] = groups.map((group, i) => ({
    label: group,
    color: PALETTE[i % PALETTE.length],
    points: byM(fast.filter((r) => r.group === group)),
  }));
  const spec: ChartSpec = {
    title: "Series algorithm across groups",
    subtitle: `${groups.length} groups`,
    xLabel: "requested digits m",
    yLabel: "wall time",
    yScale: timeScale,
    series,
  };
  return renderChart(spec);
}

export function renderFigure(kind: PlotKind, rows: BenchRow[], timeScale?: "linear" | "log"): string {
  switch (kind) {
    case "compare":
      return compareFigure(rows, timeScale ?? "log");
    case "scaling":
      return scalingFigure(rows, timeScale ?? "linear");
    case "multi-genus":
      return multiGenusFigure(rows, timeScale ?? "log");
  }
}
