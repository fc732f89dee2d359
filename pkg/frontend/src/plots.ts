/** Figure builders: each consumes a validated table and returns the SVG
 * text plus a machine-readable sidecar of the exact plotted rows. */

import { Table } from './csv.js';
import { Row } from './schemas.js';
import { Series, renderChart } from './svg.js';

export interface Figure {
  svg: string;
  /** Sidecar: the CSV rows actually plotted, unmodified. */
  points: Row[];
}

function groupBy(rows: Row[], keyOf: (r: Row) => string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const key = keyOf(row);
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }
  return groups;
}

const num = (v: Row[string]) => v as number;

/** Relay availability vs satellite count, one curve per HAP count, with
 * confidence shading. */
export function plotAvailability(table: Table): Figure {
  const groups = groupBy(table.rows, (r) => String(r.n_hap));
  const series: Series[] = [...groups.entries()].map(([nHap, rows]) => {
    const sorted = [...rows].sort((a, b) => num(a.n_sat) - num(b.n_sat));
    return {
      label: `${nHap} HAPs`,
      points: sorted.map((r) => ({ x: num(r.n_sat), y: num(r.availability) })),
      band: sorted.map((r) => ({ x: num(r.n_sat), lo: num(r.ci_low), hi: num(r.ci_high) })),
    };
  });
  const svg = renderChart(series, {
    title: 'Relay availability',
    xLabel: 'Number of satellites',
    yLabel: 'Availability',
    yMin: 0,
    yMax: 1,
  });
  return { svg, points: table.rows };
}

/** Empirical CDF curves per (label, tier); x axis in Mb/s or Mb/J. */
export function plotCdf(table: Table): Figure {
  const valueCol = table.columns[2]; // capacity_bps or ee_bits_per_joule
  const isCapacity = valueCol === 'capacity_bps';
  const groups = groupBy(table.rows, (r) => `${r.label}/${r.tier}`);
  const series: Series[] = [...groups.entries()].map(([key, rows]) => ({
    label: key,
    points: rows.map((r) => ({ x: num(r[valueCol]) / 1e6, y: num(r.cdf) })),
  }));
  const svg = renderChart(series, {
    title: isCapacity ? 'Capacity CDF' : 'Energy-efficiency CDF',
    xLabel: isCapacity ? 'Capacity (Mb/s)' : 'Energy efficiency (Mb/J)',
    yLabel: 'CDF',
    yMin: 0,
    yMax: 1,
  });
  return { svg, points: table.rows };
}

/** k-coverage probability vs SNR threshold, one curve per k, CI shading. */
export function plotKcoverage(table: Table): Figure {
  const groups = groupBy(table.rows, (r) => String(r.k));
  const series: Series[] = [...groups.entries()].map(([k, rows]) => {
    const sorted = [...rows].sort((a, b) => num(a.threshold_db) - num(b.threshold_db));
    return {
      label: `k = ${k}`,
      points: sorted.map((r) => ({ x: num(r.threshold_db), y: num(r.probability) })),
      band: sorted.map((r) => ({ x: num(r.threshold_db), lo: num(r.ci_low), hi: num(r.ci_high) })),
    };
  });
  const svg = renderChart(series, {
    title: 'k-coverage probability',
    xLabel: 'SNR threshold (dB)',
    yLabel: 'Coverage probability',
    yMin: 0,
    yMax: 1,
  });
  return { svg, points: table.rows };
}

export const PLOTTERS: Record<string, (table: Table) => Figure> = {
  availability: plotAvailability,
  cdf: plotCdf,
  kcoverage: plotKcoverage,
};
