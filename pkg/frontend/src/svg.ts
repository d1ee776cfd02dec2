/**
 * Deterministic SVG chart builder.
 *
 * Output depends only on the input series and options: fixed palette,
 * fixed layout constants, and a single number formatter, so rendering the
 * same data twice yields byte-identical markup (diffable CI artifacts).
 */

export interface Series {
  label: string;
  points: Array<[number, number]>;
  dash?: string; // stroke-dasharray
}

export interface RawPoint {
  x: number;
  y: number;
  seriesIndex: number;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  kind: "line" | "step";
  logX?: boolean;
  /** Rotates the palette; same seed, same bytes. */
  styleSeed?: number;
  /** Per-trial samples drawn as faint dots behind the aggregate lines. */
  rawPoints?: RawPoint[];
}

const W = 720;
const H = 420;
const ML = 64;
const MR = 176; // legend gutter
const MT = 40;
const MB = 56;
const PW = W - ML - MR;
const PH = H - MT - MB;

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Short, locale-free number label with up to 6 significant digits. */
export function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (Number.isInteger(v) && Math.abs(v) < 1e15) return String(v);
  return String(Number(v.toPrecision(6)));
}

/** Coordinate with sub-pixel precision; fixed decimals keep bytes stable. */
function px(v: number): string {
  return v.toFixed(2);
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function buildChart(series: Series[], opts: ChartOptions): string {
  const logX = opts.logX ?? false;
  const tx = (x: number) => (logX ? Math.log2(x) : x);

  const finite = series.flatMap((s) =>
    s.points.filter(([x, y]) => Number.isFinite(tx(x)) && Number.isFinite(y)),
  );
  const rawFinite = (opts.rawPoints ?? []).filter(
    (p) => Number.isFinite(tx(p.x)) && Number.isFinite(p.y),
  );
  if (finite.length === 0) {
    throw new Error("chart has no finite data points");
  }

  const xsData = finite.map(([x]) => x).concat(rawFinite.map((p) => p.x));
  const ysData = finite.map(([, y]) => y).concat(rawFinite.map((p) => p.y));
  const xMin = Math.min(...xsData.map(tx));
  const xMax = Math.max(...xsData.map(tx));
  let yMin = Math.min(...ysData);
  let yMax = Math.max(...ysData);
  const pad = (yMax - yMin || Math.abs(yMax) || 1) * 0.08;
  yMin -= pad;
  yMax += pad;

  const xOf = (x: number) => ML + ((tx(x) - xMin) / (xMax - xMin || 1)) * PW;
  const yOf = (y: number) => MT + PH - ((y - yMin) / (yMax - yMin || 1)) * PH;

  // Few distinct x values (element counts, power steps): tick each one.
  const uniqueXs = [...new Set(finite.map(([x]) => x))].sort((a, b) => a - b);
  const xTicks =
    uniqueXs.length <= 10 ? uniqueXs : niceTicks(xMin, xMax, 8).map((t) => (logX ? 2 ** t : t));
  const yTicks = niceTicks(yMin, yMax, 6);

  const seed = ((opts.styleSeed ?? 0) % PALETTE.length + PALETTE.length) % PALETTE.length;
  const colorOf = (i: number) => PALETTE[(i + seed) % PALETTE.length]!;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${W}" height="${H}" fill="#ffffff"/>`);
  out.push(
    `<text x="${ML + PW / 2}" y="22" font-size="15" text-anchor="middle">${esc(opts.title)}</text>`,
  );

  // Axes and grid
  out.push(`<g stroke="#d0d0d0" stroke-width="1">`);
  for (const t of yTicks) {
    const y = px(yOf(t));
    out.push(`<line x1="${ML}" y1="${y}" x2="${ML + PW}" y2="${y}"/>`);
  }
  out.push(`</g>`);
  out.push(
    `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333333"/>`,
  );
  out.push(`<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333333"/>`);

  out.push(`<g font-size="11" fill="#333333">`);
  for (const t of xTicks) {
    const x = px(xOf(t));
    out.push(
      `<line x1="${x}" y1="${MT + PH}" x2="${x}" y2="${MT + PH + 4}" stroke="#333333"/>`,
    );
    out.push(
      `<text x="${x}" y="${MT + PH + 18}" text-anchor="middle">${esc(fmt(t))}</text>`,
    );
  }
  for (const t of yTicks) {
    const y = px(yOf(t));
    out.push(
      `<text x="${ML - 6}" y="${y}" text-anchor="end" dominant-baseline="middle">${esc(fmt(t))}</text>`,
    );
  }
  out.push(`</g>`);
  out.push(
    `<text x="${ML + PW / 2}" y="${H - 12}" font-size="12" text-anchor="middle">${esc(opts.xLabel)}</text>`,
  );
  out.push(
    `<text x="18" y="${MT + PH / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 ${MT + PH / 2})">${esc(opts.yLabel)}</text>`,
  );

  // Raw samples behind the aggregate curves
  if (rawFinite.length > 0) {
    out.push(`<g class="raw" fill-opacity="0.25">`);
    for (const p of rawFinite) {
      out.push(
        `<circle cx="${px(xOf(p.x))}" cy="${px(yOf(p.y))}" r="2" fill="${colorOf(p.seriesIndex)}"/>`,
      );
    }
    out.push(`</g>`);
  }

  // Series: polyline for "line", step-after path for "step".  Non-finite
  // values (e.g. unreachable targets reported as inf) break the stroke.
  series.forEach((s, i) => {
    const pts = s.points
      .slice()
      .sort((a, b) => a[0] - b[0])
      .filter(([x, y]) => Number.isFinite(tx(x)) && Number.isFinite(y));
    if (pts.length === 0) return;
    const color = colorOf(i);
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    if (opts.kind === "step" && pts.length > 1) {
      let d = `M ${px(xOf(pts[0]![0]))} ${px(yOf(pts[0]![1]))}`;
      for (let j = 1; j < pts.length; j++) {
        d += ` H ${px(xOf(pts[j]![0]))} V ${px(yOf(pts[j]![1]))}`;
      }
      out.push(
        `<path class="series" d="${d}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`,
      );
    } else {
      const coords = pts.map(([x, y]) => `${px(xOf(x))},${px(yOf(y))}`).join(" ");
      out.push(
        `<polyline class="series" points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`,
      );
    }
    for (const [x, y] of pts) {
      out.push(
        `<circle class="marker" cx="${px(xOf(x))}" cy="${px(yOf(y))}" r="3" fill="${color}"/>`,
      );
    }
  });

  // Legend
  out.push(`<g font-size="12" fill="#333333">`);
  series.forEach((s, i) => {
    const y = MT + 10 + i * 18;
    const color = colorOf(i);
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    out.push(
      `<line x1="${ML + PW + 12}" y1="${y}" x2="${ML + PW + 36}" y2="${y}" stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    out.push(
      `<text x="${ML + PW + 42}" y="${y + 4}">${esc(s.label)}</text>`,
    );
  });
  out.push(`</g>`);

  out.push(`</svg>`);
  return out.join("\n") + "\n";
}
