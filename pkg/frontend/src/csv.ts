import { parse } from 'papaparse';
import { Row, SchemaError, validateRows } from './schemas.js';

export interface Table {
  header: string[];
  rows: Row[];
  /** Concrete column names satisfying the schema, in schema order. */
  columns: string[];
}

export function parseCsv(kind: string, text: string): Table {
  const parsed = parse<Row>(text.trim(), { header: true, dynamicTyping: true, skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`CSV parse error at row ${e.row ?? '?'}: ${e.message}`);
  }
  const header = parsed.meta.fields ?? [];
  const columns = validateRows(kind, header, parsed.data);
  return { header, rows: parsed.data, columns };
}
