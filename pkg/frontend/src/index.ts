export { BenchRow, NoDataError, SCHEMA, SchemaError, parseBenchCsv, readBenchFiles } from "./bench.js";
export {
  PlotKind,
  PlotSpec,
  compareFigure,
  fitLogLogSlope,
  multiGenusFigure,
  renderFigure,
  scalingFigure,
} from "./figures.js";
export { ChartSpec, SeriesSpec, renderChart } from "./svg.js";
export { main } from "./cli.js";
