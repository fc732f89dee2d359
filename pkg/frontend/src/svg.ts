/** Minimal deterministic SVG chart builder: axes, grid, line series with
 * optional confidence bands, legend.  No DOM, just strings. */

export interface Series {
  label: string;
  points: { x: number; y: number }[];
  /** Optional confidence band, same x order as points. */
  band?: { x: number; lo: number; hi: number }[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  yMin?: number;
  yMax?: number;
  logX?: boolean;
}

const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#17becf', '#7f7f7f'];
const MARGIN = { top: 40, right: 20, bottom: 48, left: 64 };

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? 10 * mag;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + 1e-12 * span; t += step) ticks.push(t);
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(6)).toString();
}

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => [
    ...s.points.map((p) => p.y),
    ...(s.band ?? []).flatMap((b) => [b.lo, b.hi]),
  ]);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xLo === xHi) {
    xLo -= 0.5;
    xHi += 0.5;
  }
  const tx = (x: number) => (opts.logX ? Math.log10(Math.max(x, 1e-300)) : x);
  const [txLo, txHi] = [tx(xLo), tx(xHi)];
  let yLo = opts.yMin ?? Math.min(...ys);
  let yHi = opts.yMax ?? Math.max(...ys);
  if (yLo === yHi) {
    yLo -= 0.5;
    yHi += 0.5;
  }

  const X = (x: number) => MARGIN.left + ((tx(x) - txLo) / (txHi - txLo)) * plotW;
  const Y = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`);

  const xTicks = opts.logX ? niceTicks(txLo, txHi) : niceTicks(xLo, xHi);
  const yTicks = niceTicks(yLo, yHi);
  for (const t of yTicks) {
    const y = Y(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${width - MARGIN.right}" y2="${y}" stroke="#ddd"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${fmt(t)}</text>`);
  }
  for (const t of xTicks) {
    const xVal = opts.logX ? Math.pow(10, t) : t;
    const x = X(xVal);
    parts.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${height - MARGIN.bottom}" stroke="#ddd"/>`);
    parts.push(`<text x="${x}" y="${height - MARGIN.bottom + 16}" text-anchor="middle">${fmt(xVal)}</text>`);
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" text-anchor="middle">${esc(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(opts.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (s.band && s.band.length > 1) {
      const upper = s.band.map((b) => `${X(b.x)},${Y(b.hi)}`);
      const lower = [...s.band].reverse().map((b) => `${X(b.x)},${Y(b.lo)}`);
      parts.push(`<polygon points="${[...upper, ...lower].join(' ')}" fill="${color}" opacity="0.15"/>`);
    }
    const pts = s.points.map((p) => `${X(p.x)},${Y(p.y)}`).join(' ');
    if (s.points.length > 1) {
      parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    }
    for (const p of s.points) {
      parts.push(`<circle cx="${X(p.x)}" cy="${Y(p.y)}" r="2.4" fill="${color}"/>`);
    }
    const ly = MARGIN.top + 14 + i * 16;
    parts.push(`<line x1="${width - MARGIN.right - 140}" y1="${ly - 4}" x2="${width - MARGIN.right - 118}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${width - MARGIN.right - 112}" y="${ly}">${esc(s.label)}</text>`);
  });

  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
