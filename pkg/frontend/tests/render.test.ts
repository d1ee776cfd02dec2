import { execFileSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, readdirSync, rmSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { fileURLToPath } from "url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { FIGURES } from "../src/figures.js";
import { SchemaError } from "../src/schema.js";
import { renderFigure, renderFile, renderPlacement } from "../src/render.js";

const ROOT = join(fileURLToPath(new URL(".", import.meta.url)), "..");
const FIXTURES = join(ROOT, "fixtures");

const HEADER = "scenario,trial,seed,method,K,M,N,P_dbm,metric_name,value";

function aggRow(method: string, m: number, value: number, metric = "sum_rate"): string {
  return `demo,agg,,${method},4,${m},4,20,${metric},${value}`;
}

function trialRow(method: string, m: number, trial: number, value: number): string {
  return `demo,${trial},9001,${method},4,${m},4,20,sum_rate,${value}`;
}

let outDir: string;

beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), "ris-figures-"));
});

afterAll(() => {
  rmSync(outDir, { recursive: true, force: true });
});

describe("renderFigure on the preset fixtures", () => {
  const presets = readFileSync(join(FIXTURES, "presets.txt"), "utf-8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);

  it.each(presets)("renders %s to SVG", (preset) => {
    const csv = readFileSync(join(FIXTURES, `${preset}.csv`), "utf-8");
    const svg = renderFigure(csv, preset);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg).toContain('class="series"');
  });

  it.each(presets)("re-rendering %s is byte-identical", (preset) => {
    const csv = readFileSync(join(FIXTURES, `${preset}.csv`), "utf-8");
    const a = Buffer.from(renderFigure(csv, preset), "utf-8");
    const b = Buffer.from(renderFigure(csv, preset), "utf-8");
    expect(a.equals(b)).toBe(true);
  });

  it("writes one image file per figure", () => {
    for (const preset of presets) {
      const out = join(outDir, `${preset}.svg`);
      renderFile(join(FIXTURES, `${preset}.csv`), preset, out);
      expect(existsSync(out)).toBe(true);
    }
    const written = readdirSync(outDir).filter((f) => f.endsWith(".svg"));
    expect(written).toHaveLength(presets.length);
  });
});

describe("renderFigure series layout", () => {
  it("draws one line per method with one point per element count", () => {
    const csv = [
      HEADER,
      aggRow("filled", 8, 3.1),
      aggRow("filled", 16, 3.9),
      aggRow("filled", 32, 4.5),
      aggRow("sr", 8, 2.8),
      aggRow("sr", 16, 3.2),
      aggRow("sr", 32, 3.6),
    ].join("\n");
    const svg = renderFigure(csv, "fig-efficiency");
    const lines = svg.match(/<polyline class="series" points="([^"]*)"/g) ?? [];
    expect(lines).toHaveLength(2);
    for (const line of lines) {
      const coords = /points="([^"]*)"/.exec(line)![1]!;
      expect(coords.split(" ")).toHaveLength(3);
    }
    expect(svg).toContain(">filled</text>");
    expect(svg).toContain(">sr</text>");
  });

  it("rejects a CSV without aggregate rows and writes no file", () => {
    const csvPath = join(outDir, "raw-only.csv");
    writeFileSync(csvPath, [HEADER, trialRow("filled", 8, 0, 3.0)].join("\n"));
    const out = join(outDir, "raw-only.svg");
    expect(() => renderFile(csvPath, "fig-efficiency", out)).toThrow(
      /no aggregate rows with metric "sum_rate"/,
    );
    expect(existsSync(out)).toBe(false);
  });

  it("names a missing column in the schema error", () => {
    const broken = HEADER.replace(",metric_name", "") + "\n";
    expect(() => renderFigure(broken, "fig-efficiency")).toThrowError(
      new SchemaError('missing column "metric_name"'),
    );
  });

  it("rejects unknown figure names", () => {
    expect(() => renderFigure(HEADER, "fig-nope")).toThrow(/unknown figure "fig-nope"/);
  });

  it("rejects conflicting aggregate rows at one x", () => {
    const csv = [HEADER, aggRow("filled", 8, 3.0), aggRow("filled", 8, 3.5)].join("\n");
    expect(() => renderFigure(csv, "fig-efficiency")).toThrow(/ambiguous aggregate rows/);
  });

  it("overlays raw samples only when asked", () => {
    const csv = [
      HEADER,
      aggRow("filled", 8, 3.0),
      aggRow("filled", 16, 3.5),
      trialRow("filled", 8, 0, 2.9),
      trialRow("filled", 8, 1, 3.1),
    ].join("\n");
    expect(renderFigure(csv, "fig-efficiency")).not.toContain('class="raw"');
    const withRaw = renderFigure(csv, "fig-efficiency", { rawPoints: true });
    expect(withRaw).toContain('class="raw"');
    expect((withRaw.match(/<circle cx=/g) ?? []).length).toBe(2);
  });

  it("changes colors with the style seed but stays deterministic per seed", () => {
    const csv = [HEADER, aggRow("filled", 8, 3.0), aggRow("filled", 16, 3.5)].join("\n");
    const s0 = renderFigure(csv, "fig-efficiency", { styleSeed: 0 });
    const s1 = renderFigure(csv, "fig-efficiency", { styleSeed: 1 });
    expect(s0).not.toEqual(s1);
    expect(renderFigure(csv, "fig-efficiency", { styleSeed: 1 })).toEqual(s1);
  });
});

describe("renderPlacement", () => {
  it("renders the sweep fixture as a step chart", () => {
    const csv = readFileSync(join(FIXTURES, "placement-sweep.csv"), "utf-8");
    const svg = renderPlacement(csv);
    expect(svg).toContain('<path class="series"');
  });

  it("skips unreachable (inf) counts without corrupting the path", () => {
    const svg = renderPlacement("x0,m_filled,m_sr\n5,10,14\n15,36,inf\n25,8,24\n");
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
    const srPath = svg.match(/<path class="series"[^>]*/g) ?? [];
    expect(srPath).toHaveLength(2);
  });
});

describe("command line", () => {
  const cli = join(ROOT, "dist", "cli.js");

  it("renders a figure end to end", () => {
    const out = join(outDir, "cli-efficiency.svg");
    const stdout = execFileSync(
      "node",
      [cli, "render", "--csv", join(FIXTURES, "fig-efficiency.csv"), "--figure", "fig-efficiency", "--out", out],
      { encoding: "utf-8" },
    );
    expect(stdout).toContain(`fig-efficiency -> ${out}`);
    expect(readFileSync(out, "utf-8").startsWith("<svg ")).toBe(true);
  });

  it("renders the placement bathtub from a sweep CSV", () => {
    const out = join(outDir, "cli-bathtub.svg");
    execFileSync(
      "node",
      [cli, "render", "--csv", join(FIXTURES, "placement-sweep.csv"), "--figure", "placement-bathtub", "--out", out],
      { encoding: "utf-8" },
    );
    expect(existsSync(out)).toBe(true);
  });

  it("exits nonzero on schema errors and writes nothing", () => {
    const csvPath = join(outDir, "broken.csv");
    writeFileSync(csvPath, "scenario,trial\n");
    const out = join(outDir, "broken.svg");
    expect(() =>
      execFileSync("node", [cli, "render", "--csv", csvPath, "--figure", "fig-efficiency", "--out", out], {
        encoding: "utf-8",
        stdio: "pipe",
      }),
    ).toThrow();
    expect(existsSync(out)).toBe(false);
  });

  it("prints usage without a subcommand", () => {
    expect(() => execFileSync("node", [cli], { encoding: "utf-8", stdio: "pipe" })).toThrow();
  });
});
