/**
 * Result-CSV schema: one row per (scenario, trial, method, M, N, P, metric).
 *
 * The simulator harness writes these files with a mandatory header row,
 * UTF-8, LF line endings, and unquoted fields (no field ever contains a
 * comma).  Aggregate rows carry the trial label "agg" and an empty seed.
 */

export const RESULT_COLUMNS = [
  "scenario",
  "trial",
  "seed",
  "method",
  "K",
  "M",
  "N",
  "P_dbm",
  "metric_name",
  "value",
] as const;

export type ResultColumn = (typeof RESULT_COLUMNS)[number];

export const AGG_TRIAL = "agg";

export interface ResultRow {
  scenario: string;
  trial: string;
  seed: string;
  method: string;
  k: number;
  m: number;
  n: number;
  pDbm: number;
  metric: string;
  value: number;
}

/** Raised when a CSV does not conform to the result-row schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** Parse one number the way the harness prints it (9 significant digits). */
function parseNumber(field: string, column: string, line: number): number {
  if (field === "nan") return NaN;
  if (field === "inf") return Infinity;
  if (field === "-inf") return -Infinity;
  if (field === "") {
    throw new SchemaError(`line ${line}: empty numeric field in column "${column}"`);
  }
  const v = Number(field);
  if (Number.isNaN(v)) {
    throw new SchemaError(`line ${line}: non-numeric value "${field}" in column "${column}"`);
  }
  return v;
}

/**
 * Strict parse of a harness result CSV.
 *
 * Columns are located by name, so extra columns and reordering are
 * tolerated; a missing required column raises a SchemaError naming it.
 */
export function parseResultCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: missing header row");
  }
  const header = (lines[0] ?? "").split(",");
  for (const column of RESULT_COLUMNS) {
    if (!header.includes(column)) {
      throw new SchemaError(`missing column "${column}"`);
    }
  }
  const at = new Map<ResultColumn, number>(
    RESULT_COLUMNS.map((c) => [c, header.indexOf(c)]),
  );
  const col = (fields: string[], c: ResultColumn): string => fields[at.get(c)!] ?? "";

  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] ?? "").split(",");
    if (fields.length !== header.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${header.length} fields, found ${fields.length}`,
      );
    }
    rows.push({
      scenario: col(fields, "scenario"),
      trial: col(fields, "trial"),
      seed: col(fields, "seed"),
      method: col(fields, "method"),
      k: parseNumber(col(fields, "K"), "K", i + 1),
      m: parseNumber(col(fields, "M"), "M", i + 1),
      n: parseNumber(col(fields, "N"), "N", i + 1),
      pDbm: parseNumber(col(fields, "P_dbm"), "P_dbm", i + 1),
      metric: col(fields, "metric_name"),
      value: parseNumber(col(fields, "value"), "value", i + 1),
    });
  }
  return rows;
}

/** One entry of a surface-placement sweep CSV (x0 plus one column per method). */
export interface PlacementEntry {
  x0: number;
  required: Map<string, number>;
}

/**
 * Parse a placement-sweep CSV: header "x0,m_<method>,..." and one row per
 * surface position.  Required element counts may be "inf" when the target
 * rate is unreachable within the swept cap.
 */
export function parsePlacementCsv(text: string): PlacementEntry[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: missing header row");
  }
  const header = (lines[0] ?? "").split(",");
  if (header[0] !== "x0") {
    throw new SchemaError('missing column "x0"');
  }
  const methods = header.slice(1).map((name, j) => {
    if (!name.startsWith("m_")) {
      throw new SchemaError(`column ${j + 2} ("${name}") is not an m_<method> column`);
    }
    return name.slice(2);
  });
  if (methods.length === 0) {
    throw new SchemaError("placement CSV has no m_<method> columns");
  }
  const entries: PlacementEntry[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = (lines[i] ?? "").split(",");
    if (fields.length !== header.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${header.length} fields, found ${fields.length}`,
      );
    }
    const required = new Map<string, number>();
    methods.forEach((name, j) => {
      required.set(name, parseNumber(fields[j + 1] ?? "", `m_${name}`, i + 1));
    });
    entries.push({ x0: parseNumber(fields[0] ?? "", "x0", i + 1), required });
  }
  return entries;
}
