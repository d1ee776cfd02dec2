/**
 * Turn a harness CSV plus a figure name into SVG markup.
 *
 * Aggregate rows ("agg" trials) become the plotted series; per-trial rows
 * can be overlaid as faint sample dots.  The CSV is never modified, and
 * the output file is only written after the whole document has been built.
 */

import { readFileSync, writeFileSync } from "fs";

import { FIGURES, PLACEMENT_FIGURE, figureNames, type FigureSpec } from "./figures.js";
import {
  AGG_TRIAL,
  SchemaError,
  parsePlacementCsv,
  parseResultCsv,
  type ResultRow,
} from "./schema.js";
import { buildChart, type RawPoint, type Series } from "./svg.js";

export interface RenderOptions {
  /** Overlay per-trial samples behind the aggregate lines. */
  rawPoints?: boolean;
  /** Palette rotation; rendering with the same seed is byte-stable. */
  styleSeed?: number;
}

function xValue(row: ResultRow, spec: FigureSpec): number {
  return spec.xColumn === "M" ? row.m : row.pDbm;
}

function seriesFromRows(rows: ResultRow[], spec: FigureSpec): Series[] {
  const byMethod = new Map<string, Map<number, number>>();
  for (const row of rows) {
    const x = xValue(row, spec);
    let points = byMethod.get(row.method);
    if (!points) {
      points = new Map();
      byMethod.set(row.method, points);
    }
    const seen = points.get(x);
    if (seen !== undefined && seen !== row.value && !(Number.isNaN(seen) && Number.isNaN(row.value))) {
      throw new SchemaError(
        `ambiguous aggregate rows: method "${row.method}" has values ${seen} and ${row.value} at ${spec.xColumn}=${x}`,
      );
    }
    points.set(x, row.value);
  }
  return [...byMethod.entries()].map(([label, points]) => ({
    label,
    points: [...points.entries()].sort((a, b) => a[0] - b[0]),
  }));
}

/** Render one catalogued figure from result-CSV text. */
export function renderFigure(
  csvText: string,
  figureName: string,
  opts: RenderOptions = {},
): string {
  const spec = FIGURES[figureName];
  if (!spec) {
    throw new SchemaError(
      `unknown figure "${figureName}"; available: ${figureNames().join(", ")}, ${PLACEMENT_FIGURE}`,
    );
  }
  const rows = parseResultCsv(csvText);
  const agg = rows.filter((r) => r.trial === AGG_TRIAL && r.metric === spec.metric);
  if (agg.length === 0) {
    throw new SchemaError(
      `no aggregate rows with metric "${spec.metric}"; nothing to plot`,
    );
  }
  const series = seriesFromRows(agg, spec);

  let rawPoints: RawPoint[] | undefined;
  if (opts.rawPoints) {
    const index = new Map(series.map((s, i) => [s.label, i]));
    rawPoints = rows
      .filter((r) => r.trial !== AGG_TRIAL && r.metric === spec.metric && index.has(r.method))
      .map((r) => ({ x: xValue(r, spec), y: r.value, seriesIndex: index.get(r.method)! }));
  }

  return buildChart(series, {
    title: spec.title,
    xLabel: spec.xLabel,
    yLabel: spec.yLabel,
    kind: spec.kind,
    logX: spec.logX,
    styleSeed: opts.styleSeed,
    rawPoints,
  });
}

/** Render a placement-sweep CSV (required elements along the room). */
export function renderPlacement(csvText: string, opts: RenderOptions = {}): string {
  const entries = parsePlacementCsv(csvText);
  if (entries.length === 0) {
    throw new SchemaError("placement CSV has no data rows; nothing to plot");
  }
  const methods = [...entries[0]!.required.keys()];
  const series: Series[] = methods.map((name) => ({
    label: name,
    points: entries.map((e) => [e.x0, e.required.get(name) ?? NaN] as [number, number]),
  }));
  return buildChart(series, {
    title: "Required elements vs surface position",
    xLabel: "Surface x position (m)",
    yLabel: "Required elements M",
    kind: "step",
    styleSeed: opts.styleSeed,
  });
}

/** File-to-file entry point used by the CLI. */
export function renderFile(
  csvPath: string,
  figureName: string,
  outPath: string,
  opts: RenderOptions = {},
): void {
  const text = readFileSync(csvPath, "utf-8");
  const svg =
    figureName === PLACEMENT_FIGURE
      ? renderPlacement(text, opts)
      : renderFigure(text, figureName, opts);
  writeFileSync(outPath, svg, "utf-8");
}
