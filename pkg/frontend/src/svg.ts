/**
 * Minimal deterministic SVG line charts.
 *
 * Fixed canvas, no timestamps, no randomness: identical input produces
 * byte-identical output. Times arrive in milliseconds; the y axis can be
 * linear or logarithmic, x is always the digit target.
 */

export interface SeriesSpec {
  label: string;
  color: string;
  dash?: string;
  points: Array<{ x: number; y: number }>;
}

export interface ChartSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  yScale: "linear" | "log";
  series: SeriesSpec[];
  annotations?: string[];
}

export const WIDTH = 720;
export const HEIGHT = 400;
const ML = 68;
const MR = 24;
const MT = 48;
const MB = 52;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((k) => k * mag).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 0.01; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(min)); e <= Math.ceil(Math.log10(max)); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

function fmtMs(v: number): string {
  if (v >= 1000) return `${trimNum(v / 1000)} s`;
  if (v >= 1) return `${trimNum(v)} ms`;
  return `${trimNum(v * 1000)} us`;
}

function trimNum(v: number): string {
  const r = Math.round(v * 100) / 100;
  return String(r);
}

export function renderChart(spec: ChartSpec): string {
  const pw = WIDTH - ML - MR;
  const ph = HEIGHT - MT - MB;
  const pts = spec.series.flatMap((s) => s.points);
  if (pts.length === 0) {
    throw new Error("chart without points");
  }
  const xMin = Math.min(...pts.map((p) => p.x));
  const xMax = Math.max(...pts.map((p) => p.x));
  const yMinRaw = Math.min(...pts.map((p) => p.y));
  const yMaxRaw = Math.max(...pts.map((p) => p.y));

  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * pw;
  let yTicks: number[];
  let yOf: (v: number) => number;
  if (spec.yScale === "log") {
    const lo = Math.log10(yMinRaw);
    const hi = Math.log10(yMaxRaw);
    const pad = (hi - lo || 1) * 0.05;
    const a = lo - pad;
    const b = hi + pad;
    yOf = (v) => MT + ph - ((Math.log10(v) - a) / (b - a)) * ph;
    yTicks = decadeTicks(yMinRaw, yMaxRaw).filter(
      (t) => Math.log10(t) >= a && Math.log10(t) <= b
    );
  } else {
    const a = 0;
    const b = yMaxRaw * 1.08 || 1;
    yOf = (v) => MT + ph - ((v - a) / (b - a)) * ph;
    yTicks = niceTicks(a, b, 6);
  }

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${WIDTH}" height="${HEIGHT}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="22" font-size="14" font-weight="600" fill="#222">${esc(spec.title)}</text>\n`;
  if (spec.subtitle) {
    s += `<text x="${ML}" y="38" font-size="10" fill="#888">${esc(spec.subtitle)}</text>\n`;
  }

  for (const v of yTicks) {
    const y = yOf(v).toFixed(1);
    s += `<line x1="${ML}" y1="${y}" x2="${ML + pw}" y2="${y}" stroke="#eee" stroke-width="0.7"/>\n`;
    s += `<text x="${ML - 6}" y="${(yOf(v) + 3).toFixed(1)}" font-size="9" fill="#555" text-anchor="end">${esc(fmtMs(v))}</text>\n`;
  }
  for (const v of niceTicks(xMin, xMax, 8)) {
    const x = xOf(v).toFixed(1);
    s += `<line x1="${x}" y1="${MT + ph}" x2="${x}" y2="${MT + ph + 4}" stroke="#555" stroke-width="0.7"/>\n`;
    s += `<text x="${x}" y="${MT + ph + 16}" font-size="9" fill="#555" text-anchor="middle">${trimNum(v)}</text>\n`;
  }
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + ph}" stroke="#333" stroke-width="1"/>\n`;
  s += `<line x1="${ML}" y1="${MT + ph}" x2="${ML + pw}" y2="${MT + ph}" stroke="#333" stroke-width="1"/>\n`;
  s += `<text x="${ML + pw / 2}" y="${HEIGHT - 12}" font-size="11" fill="#333" text-anchor="middle">${esc(spec.xLabel)}</text>\n`;
  s += `<text x="16" y="${MT + ph / 2}" font-size="11" fill="#333" text-anchor="middle" transform="rotate(-90 16 ${MT + ph / 2})">${esc(spec.yLabel)}</text>\n`;

  for (const series of spec.series) {
    const coords = series.points
      .map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`)
      .join(" ");
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    s += `<polyline points="${coords}" fill="none" stroke="${series.color}" stroke-width="1.6"${dash}/>\n`;
    for (const p of series.points) {
      s += `<circle cx="${xOf(p.x).toFixed(1)}" cy="${yOf(p.y).toFixed(1)}" r="2.4" fill="${series.color}"/>\n`;
    }
  }

  // legend, stacked in the upper right of the plot area
  spec.series.forEach((series, i) => {
    const y = MT + 12 + i * 14;
    const x = ML + pw - 170;
    const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
    s += `<line x1="${x}" y1="${y - 3}" x2="${x + 22}" y2="${y - 3}" stroke="${series.color}" stroke-width="1.6"${dash}/>\n`;
    s += `<text x="${x + 28}" y="${y}" font-size="10" fill="#333">${esc(series.label)}</text>\n`;
  });

  (spec.annotations ?? []).forEach((note, i) => {
    s += `<text x="${ML + 10}" y="${MT + 14 + i * 13}" font-size="10" fill="#444">${esc(note)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
