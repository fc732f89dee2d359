/** Documented CSV schemas for each figure kind, plus validation that
 * reports problems at column granularity. */

export type Row = Record<string, string | number | null>;

export interface ColumnSpec {
  name: string;
  kind: 'number' | 'string';
}

export interface Schema {
  columns: ColumnSpec[];
}

export const SCHEMAS: Record<string, Schema> = {
  availability: {
    columns: [
      { name: 'n_sat', kind: 'number' },
      { name: 'n_hap', kind: 'number' },
      { name: 'trials', kind: 'number' },
      { name: 'availability', kind: 'number' },
      { name: 'ci_low', kind: 'number' },
      { name: 'ci_high', kind: 'number' },
    ],
  },
  cdf: {
    // capacity_cdf.csv and ee_cdf.csv share this shape; the value column
    // is whichever of the two known names is present.
    columns: [
      { name: 'label', kind: 'string' },
      { name: 'tier', kind: 'string' },
      { name: 'capacity_bps|ee_bits_per_joule', kind: 'number' },
      { name: 'cdf', kind: 'number' },
    ],
  },
  kcoverage: {
    columns: [
      { name: 'threshold_db', kind: 'number' },
      { name: 'k', kind: 'number' },
      { name: 'probability', kind: 'number' },
      { name: 'ci_low', kind: 'number' },
      { name: 'ci_high', kind: 'number' },
    ],
  },
};

export class SchemaError extends Error {}

function resolveColumn(spec: ColumnSpec, present: string[]): string | null {
  const options = spec.name.split('|');
  for (const name of options) {
    if (present.includes(name)) return name;
  }
  return null;
}

/** Validate header + cell types; returns the concrete column names in
 * schema order.  Throws SchemaError naming the offending column. */
export function validateRows(kind: string, header: string[], rows: Row[]): string[] {
  const schema = SCHEMAS[kind];
  if (!schema) {
    throw new SchemaError(`unknown figure kind '${kind}' (expected ${Object.keys(SCHEMAS).join(' | ')})`);
  }
  const resolved: string[] = [];
  for (const spec of schema.columns) {
    const name = resolveColumn(spec, header);
    if (name === null) {
      throw new SchemaError(`missing column '${spec.name}' (found: ${header.join(', ')})`);
    }
    resolved.push(name);
  }
  rows.forEach((row, i) => {
    for (let c = 0; c < schema.columns.length; c++) {
      const name = resolved[c];
      const value = row[name];
      const want = schema.columns[c].kind;
      if (value === null || value === undefined || value === '') {
        throw new SchemaError(`column '${name}': empty value at data row ${i + 1}`);
      }
      if (want === 'number' && typeof value !== 'number') {
        throw new SchemaError(`column '${name}': expected a number at data row ${i + 1}, got '${value}'`);
      }
      if (want === 'number' && Number.isNaN(value)) {
        throw new SchemaError(`column '${name}': NaN at data row ${i + 1}`);
      }
    }
  });
  return resolved;
}
