#!/usr/bin/env node
import { writeFileSync } from 'fs'
import { parseArgs } from 'util'

import { CsvError, loadSweepCsv } from './csv'
import { CurveSpec, renderSvg } from './render'

const USAGE =
  'usage: plot --out FILE.png|FILE.svg [--title T] FILE1.csv[:label] [FILE2.csv[:label] ...]'

/** Split an input argument into csv path and optional label override
 * (everything after a ':' that follows the .csv suffix). */
export function splitCurveArg(arg: string): { file: string; label?: string } {
  const idx = arg.lastIndexOf(':')
  if (idx > 0 && arg.slice(0, idx).toLowerCase().endsWith('.csv')) {
    return { file: arg.slice(0, idx), label: arg.slice(idx + 1) }
  }
  return { file: arg }
}

export function main(argv: string[]): number {
  let parsed
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        out: { type: 'string' },
        title: { type: 'string' },
      },
      allowPositionals: true,
    })
  } catch (err) {
    console.error(`error: ${(err as Error).message}`)
    console.error(USAGE)
    return 1
  }
  const out = parsed.values.out
  const inputs = parsed.positionals
  if (!out || inputs.length === 0) {
    console.error(USAGE)
    return 1
  }

  const curves: CurveSpec[] = []
  for (const arg of inputs) {
    const { file, label } = splitCurveArg(arg)
    try {
      curves.push({ file, rows: loadSweepCsv(file), label, styleIndex: curves.length })
    } catch (err) {
      if (err instanceof CsvError) {
        console.error(`error: ${err.message}`)
        return 2
      }
      throw err
    }
  }

  const svg = renderSvg(curves, parsed.values.title ?? 'Block error rate')
  try {
    if (out.toLowerCase().endsWith('.png')) {
      // resvg is loaded lazily so svg output works even without it
      const { Resvg } = require('@resvg/resvg-js')
      writeFileSync(out, new Resvg(svg).render().asPng())
    } else {
      writeFileSync(out, svg)
    }
  } catch (err) {
    console.error(`error: cannot write ${out}: ${(err as Error).message}`)
    return 3
  }
  return 0
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)))
}
