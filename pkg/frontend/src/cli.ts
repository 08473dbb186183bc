#!/usr/bin/env node
import { writeFileSync } from "node:fs";
import { MissingColumnError, SchemaMismatchError } from "./schema.js";
import { PlotConfigError, loadSpec, renderFerPlot } from "./plot.js";

function main(argv: string[]): number {
  const args = argv.slice(2);
  const specIdx = args.indexOf("--spec");
  if (specIdx < 0 || specIdx + 1 >= args.length) {
    console.error("usage: plot-fer --spec <plot-spec.json>");
    return 2;
  }
  try {
    const spec = loadSpec(args[specIdx + 1]);
    const svg = renderFerPlot(spec);
    writeFileSync(spec.output, svg);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (e) {
    if (
      e instanceof SchemaMismatchError ||
      e instanceof MissingColumnError ||
      e instanceof PlotConfigError
    ) {
      console.error(`plot-fer: ${e.message}`);
      return 2;
    }
    throw e;
  }
}

process.exit(main(process.argv));
