import { readFileSync } from "node:fs";
import { BoundPoint, SimPoint, readBoundCsv, readSimCsv } from "./schema.js";
import { formatTick, linearScale, logScale, px } from "./scales.js";

export interface PlotInput {
  path: string;
  label: string;
  kind: "sim" | "bound";
}

export interface PlotSpec {
  inputs: PlotInput[];
  output: string;
  title?: string;
  x_label?: string;
}

export class PlotConfigError extends Error {}

export function loadSpec(path: string): PlotSpec {
  let doc: unknown;
  try {
    doc = JSON.parse(readFileSync(path, "utf8"));
  } catch (e) {
    throw new PlotConfigError(`${path}: ${(e as Error).message}`);
  }
  const spec = doc as PlotSpec;
  if (!Array.isArray(spec.inputs) || spec.inputs.length === 0) {
    throw new PlotConfigError(`${path}: inputs must be a non-empty array`);
  }
  for (const inp of spec.inputs) {
    if (!inp.path || !inp.label || (inp.kind !== "sim" && inp.kind !== "bound")) {
      throw new PlotConfigError(
        `${path}: each input needs path, label, and kind 'sim' or 'bound'`
      );
    }
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new PlotConfigError(`${path}: output must be a file path`);
  }
  return spec;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 24, top: 36, bottom: 52 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

interface Series {
  label: string;
  kind: "sim" | "bound";
  sim?: SimPoint[];
  bound?: BoundPoint[];
}

/** Render FER curves to a deterministic SVG document.
 *
 * Simulation series draw as markers with Clopper-Pearson whiskers joined by a
 * thin line; bounds draw as dashed lines.  The y axis is logarithmic, so
 * zero-FER points are dropped (they have no finite log position).
 */
export function renderFerPlot(spec: PlotSpec): string {
  const series: Series[] = spec.inputs.map((inp) => {
    if (inp.kind === "sim") {
      return { label: inp.label, kind: "sim", sim: readSimCsv(inp.path) };
    }
    return { label: inp.label, kind: "bound", bound: readBoundCsv(inp.path) };
  });

  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of series) {
    for (const p of s.sim ?? []) {
      xs.push(p.x);
      if (p.fer > 0) ys.push(p.fer);
      if (p.ciHi > 0) ys.push(p.ciHi);
      if (p.ciLo > 0) ys.push(p.ciLo);
    }
    for (const p of s.bound ?? []) {
      xs.push(p.x);
      if (p.value > 0) ys.push(p.value);
    }
  }
  if (xs.length === 0 || ys.length === 0) {
    throw new PlotConfigError("no plottable points (every FER/bound value is zero or absent)");
  }
  const x = linearScale(Math.min(...xs), Math.max(...xs), MARGIN.left, WIDTH - MARGIN.right);
  const yLo = Math.pow(10, Math.floor(Math.log10(Math.min(...ys))));
  const yHi = Math.pow(10, Math.ceil(Math.log10(Math.max(...ys))));
  const y = logScale(yLo, yHi === yLo ? yLo * 10 : yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const out: string[] = [];
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  if (spec.title) {
    out.push(
      `<text x="${px(WIDTH / 2)}" y="20" text-anchor="middle" font-family="sans-serif" font-size="15">${escapeXml(spec.title)}</text>`
    );
  }

  // frame and grid
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  for (const t of y.ticks()) {
    const yy = y(t);
    out.push(`<line x1="${px(x0)}" y1="${px(yy)}" x2="${px(x1)}" y2="${px(yy)}" stroke="#dddddd" stroke-width="1"/>`);
    out.push(`<text x="${px(x0 - 8)}" y="${px(yy + 4)}" text-anchor="end" font-family="sans-serif" font-size="12">${formatTick(t)}</text>`);
  }
  for (const t of x.ticks()) {
    const xx = x(t);
    out.push(`<line x1="${px(xx)}" y1="${px(y0)}" x2="${px(xx)}" y2="${px(y1)}" stroke="#eeeeee" stroke-width="1"/>`);
    out.push(`<text x="${px(xx)}" y="${px(y0 + 18)}" text-anchor="middle" font-family="sans-serif" font-size="12">${formatTick(t)}</text>`);
  }
  out.push(`<rect x="${px(x0)}" y="${px(y1)}" width="${px(x1 - x0)}" height="${px(y0 - y1)}" fill="none" stroke="#333333" stroke-width="1"/>`);
  out.push(`<text x="${px((x0 + x1) / 2)}" y="${px(HEIGHT - 14)}" text-anchor="middle" font-family="sans-serif" font-size="13">${escapeXml(spec.x_label ?? "channel parameter")}</text>`);
  out.push(`<text x="18" y="${px((y0 + y1) / 2)}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 ${px((y0 + y1) / 2)})">FER</text>`);

  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    if (s.kind === "bound") {
      const pts = s.bound!.filter((p) => p.value > 0).sort((a, b) => a.x - b.x);
      const path = pts.map((p, i) => `${i === 0 ? "M" : "L"}${px(x(p.x))} ${px(y(p.value))}`).join(" ");
      out.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.5" stroke-dasharray="6 4"/>`);
      return;
    }
    const pts = s.sim!.filter((p) => p.fer > 0).sort((a, b) => a.x - b.x);
    const path = pts.map((p, i) => `${i === 0 ? "M" : "L"}${px(x(p.x))} ${px(y(p.fer))}`).join(" ");
    if (pts.length > 1) {
      out.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1"/>`);
    }
    for (const p of pts) {
      const cx = x(p.x);
      if (p.ciLo > 0 && p.ciHi > 0) {
        out.push(`<line x1="${px(cx)}" y1="${px(y(p.ciLo))}" x2="${px(cx)}" y2="${px(y(p.ciHi))}" stroke="${color}" stroke-width="1"/>`);
        out.push(`<line x1="${px(cx - 3)}" y1="${px(y(p.ciLo))}" x2="${px(cx + 3)}" y2="${px(y(p.ciLo))}" stroke="${color}" stroke-width="1"/>`);
        out.push(`<line x1="${px(cx - 3)}" y1="${px(y(p.ciHi))}" x2="${px(cx + 3)}" y2="${px(y(p.ciHi))}" stroke="${color}" stroke-width="1"/>`);
      }
      out.push(`<circle cx="${px(cx)}" cy="${px(y(p.fer))}" r="3.5" fill="${color}"/>`);
    }
  });

  // legend
  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    const ly = y1 + 14 + 18 * si;
    const lx = x1 - 190;
    if (s.kind === "bound") {
      out.push(`<line x1="${px(lx)}" y1="${px(ly - 4)}" x2="${px(lx + 26)}" y2="${px(ly - 4)}" stroke="${color}" stroke-width="1.5" stroke-dasharray="6 4"/>`);
    } else {
      out.push(`<line x1="${px(lx)}" y1="${px(ly - 4)}" x2="${px(lx + 26)}" y2="${px(ly - 4)}" stroke="${color}" stroke-width="1"/>`);
      out.push(`<circle cx="${px(lx + 13)}" cy="${px(ly - 4)}" r="3.5" fill="${color}"/>`);
    }
    out.push(`<text x="${px(lx + 32)}" y="${px(ly)}" font-family="sans-serif" font-size="12">${escapeXml(s.label)}</text>`);
  });

  out.push("</svg>");
  return out.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
