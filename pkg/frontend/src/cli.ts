#!/usr/bin/env node
/**
 * ris-figures render --csv results.csv --figure <name> --out fig.svg
 *
 * Optional flags: --raw (overlay per-trial samples), --style-seed N.
 * "--figure placement-bathtub" expects a placement-sweep CSV instead of
 * the standard result schema.
 */

import { pathToFileURL } from "url";

import { PLACEMENT_FIGURE, figureNames } from "./figures.js";
import { renderFile } from "./render.js";

function usage(): string {
  return [
    "usage: ris-figures render --csv <results.csv> --figure <name> --out <fig.svg> [--raw] [--style-seed N]",
    `figures: ${figureNames().join(", ")}, ${PLACEMENT_FIGURE}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(usage());
    return 2;
  }
  const flags = new Map<string, string>();
  let raw = false;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--raw") {
      raw = true;
    } else if (arg.startsWith("--")) {
      const value = argv[++i];
      if (value === undefined) {
        console.error(`missing value for ${arg}\n${usage()}`);
        return 2;
      }
      flags.set(arg.slice(2), value);
    } else {
      console.error(`unexpected argument "${arg}"\n${usage()}`);
      return 2;
    }
  }
  const csv = flags.get("csv");
  const figure = flags.get("figure");
  const out = flags.get("out");
  if (!csv || !figure || !out) {
    console.error(usage());
    return 2;
  }
  const styleSeed = Number(flags.get("style-seed") ?? "0");
  if (!Number.isInteger(styleSeed)) {
    console.error(`--style-seed must be an integer\n${usage()}`);
    return 2;
  }
  try {
    renderFile(csv, figure, out, { rawPoints: raw, styleSeed });
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
  console.log(`${figure} -> ${out}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
