/**
 * Benchmark CSV loading.
 *
 * The producer writes one row per (algorithm, digit target) with the fixed
 * header below; anything else is a schema mismatch, reported with the file
 * it came from.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export const SCHEMA = ["group", "algo", "m", "nu", "time_ns", "fingerprint"] as const;

export interface BenchRow {
  group: string;
  algo: "naive" | "fast";
  m: number;
  nu: number;
  timeNs: number;
  fingerprint: string;
}

export class SchemaError extends Error {}
export class NoDataError extends Error {}

export function parseBenchCsv(text: string, source: string): BenchRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== SCHEMA.join(",")) {
    throw new SchemaError(
      `${source}: expected header "${SCHEMA.join(",")}", found "${fields.join(",")}"`
    );
  }
  return parsed.data.map((raw, i) => {
    const m = Number(raw.m);
    const nu = Number(raw.nu);
    const timeNs = Number(raw.time_ns);
    const algo = raw.algo;
    if (algo !== "naive" && algo !== "fast") {
      throw new SchemaError(`${source} row ${i + 1}: unknown algorithm "${algo}"`);
    }
    if (!Number.isFinite(m) || !Number.isFinite(nu) || !Number.isFinite(timeNs)) {
      throw new SchemaError(`${source} row ${i + 1}: non-numeric m/nu/time_ns`);
    }
    if (timeNs <= 0) {
      throw new SchemaError(`${source} row ${i + 1}: non-positive time`);
    }
    return { group: raw.group, algo, m, nu, timeNs, fingerprint: raw.fingerprint };
  });
}

/** Concatenation of every input file; empty overall input is an error. */
export function readBenchFiles(paths: string[]): BenchRow[] {
  const rows: BenchRow[] = [];
  for (const path of paths) {
    rows.push(...parseBenchCsv(readFileSync(path, "utf-8"), path));
  }
  if (rows.length === 0) {
    throw new NoDataError(`no data in ${paths.join(", ")}`);
  }
  return rows;
}
