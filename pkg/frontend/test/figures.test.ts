import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { BenchRow, NoDataError, readBenchFiles } from "../src/bench.js";
import {
  compareFigure,
  fitLogLogSlope,
  multiGenusFigure,
  renderFigure,
  scalingFigure,
} from "../src/figures.js";

const FIXTURES = join(__dirname, "fixtures");

function synthetic(ms: number[], slope: number, algo: "fast" | "naive" = "fast"): BenchRow[] {
  return ms.map((m) => ({
    group: "synth",
    algo,
    m,
    nu: m,
    timeNs: Math.round(1e6 * Math.pow(m, slope)),
    fingerprint: "0:1",
  }));
}

describe("slope fitting", () => {
  it("recovers the exponent of an exact power law", () => {
    const { slope } = fitLogLogSlope(synthetic([20, 40, 80, 160], 2.5));
    expect(slope).toBeCloseTo(2.5, 3);
  });

  it("fits only over the largest decade of m", () => {
    // the m=2 row lies below max/10 and would wreck the fit if included
    const rows = [...synthetic([2], 8), ...synthetic([20, 60, 180], 2)];
    const { slope, used } = fitLogLogSlope(rows);
    expect(used).toBe(3);
    expect(slope).toBeCloseTo(2, 3);
  });

  it("refuses a single digit target", () => {
    expect(() => fitLogLogSlope(synthetic([50], 2))).toThrow(NoDataError);
  });
});

describe("compare figure", () => {
  const rows = readBenchFiles([join(FIXTURES, "q3_plain_compare.csv")]);

  it("shows both algorithms and the data crosses over", () => {
    const at = (algo: string, m: number) =>
      rows.find((r) => r.algo === algo && r.m === m)!.timeNs;
    // the word product starts cheaper and loses before giving up entirely
    expect(at("naive", 4)).toBeLessThan(at("fast", 4));
    expect(at("naive", 14)).toBeGreaterThan(at("fast", 14));
    expect(rows.some((r) => r.algo === "naive" && r.m === 19)).toBe(false);
    expect(rows.some((r) => r.algo === "fast" && r.m === 19)).toBe(true);

    const svg = compareFigure(rows);
    expect((svg.match(/<polyline /g) ?? []).length).toBe(2);
    expect(svg).toContain(">naive<");
    expect(svg).toContain(">fast<");
  });

  it("is deterministic", () => {
    expect(compareFigure(rows)).toBe(compareFigure(rows));
  });
});

describe("scaling figure", () => {
  const rows = readBenchFiles([join(FIXTURES, "q3_plain_scaling.csv")]);

  it("annotates the fitted slope on a linear time axis", () => {
    const svg = scalingFigure(rows);
    const { slope } = fitLogLogSlope(rows);
    expect(svg).toContain(`fitted log-log slope ${slope.toFixed(2)}`);
    expect(slope).toBeGreaterThan(1.5);
    expect(slope).toBeLessThan(3.5);
    // linear axis: no sub-millisecond decade labels for these times
    expect(svg).toContain(">0 us<");
  });

  it("needs fast rows", () => {
    expect(() => scalingFigure(synthetic([10, 20], 2, "naive"))).toThrow(NoDataError);
  });
});

describe("multi-genus figure", () => {
  it("draws one curve per group across inputs", () => {
    const rows = readBenchFiles([
      join(FIXTURES, "q3_plain_compare.csv"),
      join(FIXTURES, "q5_diag_fast.csv"),
    ]);
    const svg = multiGenusFigure(rows);
    expect(svg).toContain(">q3_plain<");
    expect(svg).toContain(">q5_diag<");
    expect((svg.match(/<polyline /g) ?? []).length).toBe(2);
  });
});

describe("kind dispatch", () => {
  it("honors a time-scale override", () => {
    const rows = readBenchFiles([join(FIXTURES, "q3_plain_scaling.csv")]);
    expect(renderFigure("scaling", rows, "log")).not.toBe(
      renderFigure("scaling", rows, "linear")
    );
  });
});
