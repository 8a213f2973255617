/**
 * benchplot --kind compare|scaling|multi-genus --in bench.csv [--in more.csv]
 *           --out figure.svg [--time-scale log|linear]
 *
 * The output format follows the extension: .svg is written directly, .png
 * is rasterized from the same SVG. Exit codes: 0 ok, 1 any error.
 */

import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { NoDataError, SchemaError, readBenchFiles } from "./bench.js";
import { PlotKind, renderFigure } from "./figures.js";

const KINDS: PlotKind[] = ["compare", "scaling", "multi-genus"];

class CliError extends Error {}

export async function main(argv: string[]): Promise<number> {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
        "time-scale": { type: "string" },
      },
    }).values;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  const kind = args.kind as PlotKind | undefined;
  const inputs = args.in ?? [];
  const out = args.out;
  const timeScale = args["time-scale"] as "linear" | "log" | undefined;
  if (!kind || !KINDS.includes(kind)) {
    console.error(`error: --kind must be one of ${KINDS.join(", ")}`);
    return 1;
  }
  if (inputs.length === 0 || !out) {
    console.error("error: need at least one --in CSV and an --out image path");
    return 1;
  }
  if (timeScale && timeScale !== "linear" && timeScale !== "log") {
    console.error("error: --time-scale must be log or linear");
    return 1;
  }

  try {
    const rows = readBenchFiles(inputs);
    const svg = renderFigure(kind, rows, timeScale);
    if (out.endsWith(".png")) {
      writeFileSync(out, await rasterize(svg));
    } else {
      writeFileSync(out, svg);
    }
    console.log(`wrote ${out} (${rows.length} rows)`);
    return 0;
  } catch (err) {
    if (
      err instanceof SchemaError ||
      err instanceof NoDataError ||
      err instanceof CliError
    ) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if ((err as NodeJS.ErrnoException).code !== undefined) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

async function rasterize(svg: string): Promise<Buffer> {
  let resvg;
  try {
    resvg = await import("@resvg/resvg-js");
  } catch {
    throw new CliError(
      "PNG output needs the optional @resvg/resvg-js package; use an .svg path instead"
    );
  }
  const rendered = new resvg.Resvg(svg, {
    fitTo: { mode: "width", value: 1440 },
  });
  return rendered.render().asPng();
}
