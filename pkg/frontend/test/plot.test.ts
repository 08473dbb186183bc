import { readFileSync } from "node:fs";
import { describe, expect, test } from "vitest";
import { renderFerPlot } from "../src/plot.js";
import { MissingColumnError, SchemaMismatchError, readSimCsv } from "../src/schema.js";

const FIX = "test/fixtures";

describe("plot_fer", () => {
  test("golden-image regression: byte-identical SVG for the fixture inputs", () => {
    const svg = renderFerPlot({
      inputs: [
        { path: `${FIX}/sim_a.csv`, label: "[512,256] simulation", kind: "sim" },
        { path: `${FIX}/sim_b.csv`, label: "[128,64] simulation", kind: "sim" },
        { path: `${FIX}/bound.csv`, label: "Approx-UB [512,256]", kind: "bound" },
      ],
      output: "unused.svg",
      title: "ML erasure decoding on the BEC",
      x_label: "erasure probability",
    });
    const golden = readFileSync(`${FIX}/golden.svg`, "utf8");
    expect(svg).toBe(golden);
  });

  test("re-rendering identical inputs is byte-stable", () => {
    const spec = {
      inputs: [{ path: `${FIX}/sim_a.csv`, label: "a", kind: "sim" as const }],
      output: "unused.svg",
    };
    expect(renderFerPlot(spec)).toBe(renderFerPlot(spec));
  });

  test("schema mismatch fails with a clear error", () => {
    expect(() => readSimCsv(`${FIX}/bad_schema.csv`)).toThrowError(MissingColumnError);
    expect(() => readSimCsv(`${FIX}/bad_schema.csv`)).toThrowError(/missing column/);
    expect(() =>
      renderFerPlot({
        inputs: [{ path: `${FIX}/bad_schema.csv`, label: "x", kind: "sim" }],
        output: "unused.svg",
      })
    ).toThrowError();
    // a bounds CSV fed as a sim CSV is a schema failure, not a crash
    expect(() => readSimCsv(`${FIX}/bound.csv`)).toThrowError(/missing column|expected schema/);
  });

  test("single-point CSV renders a marker without crashing", () => {
    const svg = renderFerPlot({
      inputs: [{ path: `${FIX}/single.csv`, label: "one point", kind: "sim" }],
      output: "unused.svg",
    });
    expect(svg).toContain("<circle");
    expect(svg).toContain("</svg>");
  });

  test("empty overlay list plots simulation curves only", () => {
    const svg = renderFerPlot({
      inputs: [
        { path: `${FIX}/sim_a.csv`, label: "sim only", kind: "sim" },
        { path: `${FIX}/sim_b.csv`, label: "sim only 2", kind: "sim" },
      ],
      output: "unused.svg",
    });
    expect(svg).not.toContain("stroke-dasharray");
    expect(svg).toContain("<circle");
  });

  test("bounds draw dashed, simulations draw markers", () => {
    const svg = renderFerPlot({
      inputs: [
        { path: `${FIX}/sim_a.csv`, label: "sim", kind: "sim" },
        { path: `${FIX}/bound.csv`, label: "bound", kind: "bound" },
      ],
      output: "unused.svg",
    });
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("<circle");
  });
});
