#!/usr/bin/env node
/** `ntnsim-plot <kind> --in file.csv --out fig.svg`
 *
 * Renders one figure from a documented CSV and writes a JSON sidecar
 * (`<out>.points.json`) with the exact rows plotted.  Exits 1 on schema
 * or usage errors, naming the offending column.
 */

import { readFileSync, writeFileSync } from 'fs';
import { parseCsv } from './csv.js';
import { PLOTTERS } from './plots.js';
import { SchemaError } from './schemas.js';

interface Args {
  kind: string;
  in: string;
  out: string;
}

function parseArgs(argv: string[]): Args {
  // Accept both `ntnsim-plot <kind> ...` and `ntnsim-plot plot <kind> ...`.
  if (argv[0] === 'plot') argv = argv.slice(1);
  const [kind, ...rest] = argv;
  const flags: Record<string, string> = {};
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    if (!key.startsWith('--') || rest[i + 1] === undefined) {
      throw new SchemaError(`usage: plot <kind> --in file.csv --out fig.svg (bad arg '${key}')`);
    }
    flags[key.slice(2)] = rest[i + 1];
  }
  if (!kind || !(kind in PLOTTERS)) {
    throw new SchemaError(`usage: plot <kind>; kind must be one of ${Object.keys(PLOTTERS).join(' | ')}`);
  }
  if (!flags.in || !flags.out) {
    throw new SchemaError('usage: plot <kind> --in file.csv --out fig.svg');
  }
  return { kind, in: flags.in, out: flags.out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
  try {
    const text = readFileSync(args.in, 'utf8');
    const table = parseCsv(args.kind, text);
    const figure = PLOTTERS[args.kind](table);
    writeFileSync(args.out, figure.svg);
    const sidecar = args.out.replace(/\.svg$/, '') + '.points.json';
    writeFileSync(sidecar, JSON.stringify(figure.points, null, 2) + '\n');
    console.log(`${args.out}: ${figure.points.length} points`);
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema error: ${e.message}`);
      return 1;
    }
    console.error(`error: ${(e as Error).message}`);
    return 2;
  }
}

import { pathToFileURL } from 'url';

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
