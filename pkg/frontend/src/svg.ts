// Minimal deterministic SVG line charts: no DOM, no canvas, output is a
// plain vector file built from the input data alone.

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dash?: string;
  width?: number;
}

export interface RefLine {
  y: number;
  color?: string;
  label?: string;
}

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLines?: RefLine[];
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
  "#aec7e8", "#ff9896",
];

const PANEL_W = 720;
const PANEL_H = 260;
const MARGIN = { top: 34, right: 16, bottom: 40, left: 62 };

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [0];
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const tick = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / tick) * tick; v <= hi + tick / 1e6; v += tick) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(4)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

function renderPanel(panel: Panel, yOffset: number): string {
  const xs = panel.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = panel.series.flatMap((s) => s.points.map((p) => p[1]));
  for (const ref of panel.refLines ?? []) ys.push(ref.y);
  let [x0, x1] = extent(xs);
  let [y0, y1] = extent(ys);
  const yPad = (y1 - y0) * 0.08 || Math.max(Math.abs(y0), 1) * 0.1;
  y0 -= yPad;
  y1 += yPad;
  if (x0 === x1) x1 = x0 + 1;

  const plotW = PANEL_W - MARGIN.left - MARGIN.right;
  const plotH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const sx = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * plotW;
  const sy = (v: number) =>
    yOffset + MARGIN.top + plotH - ((v - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  const top = yOffset + MARGIN.top;
  parts.push(
    `<text x="${MARGIN.left}" y="${top - 12}" class="title">${esc(panel.title)}</text>`,
  );
  parts.push(
    `<rect x="${MARGIN.left}" y="${top}" width="${plotW}" height="${plotH}" class="frame"/>`,
  );

  for (const t of niceTicks(y0, y1)) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" class="grid"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 3.5}" class="ytick">${fmt(t)}</text>`);
  }
  for (const t of niceTicks(x0, x1, 8)) {
    const x = sx(t);
    parts.push(`<line x1="${x}" y1="${top + plotH}" x2="${x}" y2="${top + plotH + 4}" class="axis"/>`);
    parts.push(`<text x="${x}" y="${top + plotH + 16}" class="xtick">${fmt(t)}</text>`);
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${top + plotH + 32}" class="xlabel">${esc(panel.xLabel)}</text>`,
  );
  parts.push(
    `<text transform="translate(14,${top + plotH / 2}) rotate(-90)" class="xlabel">${esc(panel.yLabel)}</text>`,
  );

  for (const ref of panel.refLines ?? []) {
    const y = sy(ref.y);
    const color = ref.color ?? "#999999";
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="${color}" stroke-dasharray="2 3" fill="none"/>`,
    );
  }

  let legendX = MARGIN.left + 8;
  for (const s of panel.series) {
    if (s.points.length === 0) continue;
    const path = s.points
      .map((p, i) => `${i === 0 ? "M" : "L"}${sx(p[0]).toFixed(2)} ${sy(p[1]).toFixed(2)}`)
      .join("");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<path d="${path}" stroke="${s.color}" stroke-width="${s.width ?? 1.4}" fill="none"${dash}/>`,
    );
    parts.push(
      `<line x1="${legendX}" y1="${top + 10}" x2="${legendX + 16}" y2="${top + 10}" stroke="${s.color}" stroke-width="2"${dash}/>`,
    );
    parts.push(`<text x="${legendX + 20}" y="${top + 13}" class="legend">${esc(s.label)}</text>`);
    legendX += 28 + 7 * s.label.length;
  }
  return parts.join("\n");
}

export function renderFigure(panels: Panel[]): string {
  const height = PANEL_H * panels.length;
  const body = panels.map((p, i) => renderPanel(p, i * PANEL_H)).join("\n");
  return `<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL_W}" height="${height}" viewBox="0 0 ${PANEL_W} ${height}">
<style>
text { font-family: Helvetica, Arial, sans-serif; font-size: 11px; fill: #222; }
.title { font-size: 13px; font-weight: bold; }
.legend { font-size: 10px; }
.xtick { text-anchor: middle; }
.ytick { text-anchor: end; }
.xlabel { text-anchor: middle; font-size: 12px; }
.frame { fill: none; stroke: #222; }
.grid { stroke: #dddddd; }
.axis { stroke: #222; }
</style>
<rect width="100%" height="100%" fill="white"/>
${body}
</svg>
`;
}
