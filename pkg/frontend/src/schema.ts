import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Column sets are versioned with the harness; mismatches are hard errors. */
export const SIM_COLUMNS = [
  "channel_param",
  "trials",
  "errors",
  "fer",
  "ci_lo",
  "ci_hi",
  "mean_iters",
  "mean_queries",
  "certified_frac",
] as const;

export const BOUND_COLUMNS = ["kind", "param", "value", "ci_lo", "ci_hi"] as const;

export class SchemaMismatchError extends Error {}
export class MissingColumnError extends Error {}

export interface SimPoint {
  x: number;
  fer: number;
  ciLo: number;
  ciHi: number;
}

export interface BoundPoint {
  x: number;
  value: number;
}

function parseCsv(path: string): { header: string[]; rows: string[][] } {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaMismatchError(`${path}: CSV parse error: ${parsed.errors[0].message}`);
  }
  const [header, ...rows] = parsed.data;
  if (!header) {
    throw new SchemaMismatchError(`${path}: empty CSV`);
  }
  return { header, rows };
}

function requireColumns(path: string, header: string[], want: readonly string[]): void {
  if (header.length !== want.length || !want.every((c, i) => header[i] === c)) {
    const missing = want.filter((c) => !header.includes(c));
    if (missing.length > 0) {
      throw new MissingColumnError(
        `${path}: missing column(s) ${missing.join(", ")}; expected schema [${want.join(",")}]`
      );
    }
    throw new SchemaMismatchError(
      `${path}: column set [${header.join(",")}] does not match the expected schema [${want.join(",")}]`
    );
  }
}

function num(path: string, field: string, raw: string): number {
  const v = Number(raw);
  if (!Number.isFinite(v)) {
    throw new SchemaMismatchError(`${path}: non-numeric value '${raw}' in column ${field}`);
  }
  return v;
}

export function readSimCsv(path: string): SimPoint[] {
  const { header, rows } = parseCsv(path);
  requireColumns(path, header, SIM_COLUMNS);
  return rows.map((r) => ({
    x: num(path, "channel_param", r[0]),
    fer: num(path, "fer", r[3]),
    ciLo: num(path, "ci_lo", r[4]),
    ciHi: num(path, "ci_hi", r[5]),
  }));
}

export function readBoundCsv(path: string): BoundPoint[] {
  const { header, rows } = parseCsv(path);
  requireColumns(path, header, BOUND_COLUMNS);
  return rows.map((r) => ({
    x: num(path, "param", r[1]),
    value: num(path, "value", r[2]),
  }));
}
