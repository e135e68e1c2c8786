import { readFileSync } from 'fs'

export const EXPECTED_HEADER = [
  'snr_db', 'frames', 'errors', 'bler', 'ci_low', 'ci_high',
  'metric', 'window', 'alpha', 'beta', 'n_rx', 'code', 'seed',
]

export interface SweepRow {
  snrDb: number
  frames: number
  errors: number
  bler: number
  ciLow: number
  ciHigh: number
  metric: string
  window: number
  alpha: number
  beta: number
  nRx: number
  code: string
  seed: number
}

export class CsvError extends Error {
  constructor(public readonly file: string, detail: string) {
    super(`${file}: ${detail}`)
  }
}

function numField(file: string, name: string, raw: string, line: number): number {
  const v = Number(raw)
  if (raw.trim() === '' || Number.isNaN(v)) {
    throw new CsvError(file, `line ${line}: bad numeric value ${JSON.stringify(raw)} for ${name}`)
  }
  return v
}

export function parseSweepCsv(file: string, text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== '')
  if (lines.length === 0) throw new CsvError(file, 'empty file')
  const header = lines[0].split(',').map((h) => h.trim())
  for (const col of EXPECTED_HEADER) {
    if (!header.includes(col)) {
      throw new CsvError(file, `missing column ${JSON.stringify(col)}`)
    }
  }
  if (header.length !== EXPECTED_HEADER.length ||
      !EXPECTED_HEADER.every((c, i) => header[i] === c)) {
    throw new CsvError(file, `header must be exactly: ${EXPECTED_HEADER.join(',')}`)
  }
  if (lines.length < 2) throw new CsvError(file, 'no data rows')

  const rows: SweepRow[] = []
  for (let i = 1; i < lines.length; i++) {
    const f = lines[i].split(',')
    if (f.length !== EXPECTED_HEADER.length) {
      throw new CsvError(file, `line ${i + 1}: expected ${EXPECTED_HEADER.length} fields, got ${f.length}`)
    }
    rows.push({
      snrDb: numField(file, 'snr_db', f[0], i + 1),
      frames: numField(file, 'frames', f[1], i + 1),
      errors: numField(file, 'errors', f[2], i + 1),
      bler: numField(file, 'bler', f[3], i + 1),
      ciLow: numField(file, 'ci_low', f[4], i + 1),
      ciHigh: numField(file, 'ci_high', f[5], i + 1),
      metric: f[6],
      window: numField(file, 'window', f[7], i + 1),
      alpha: numField(file, 'alpha', f[8], i + 1),
      beta: numField(file, 'beta', f[9], i + 1),
      nRx: numField(file, 'n_rx', f[10], i + 1),
      code: f[11],
      seed: numField(file, 'seed', f[12], i + 1),
    })
  }
  rows.sort((a, b) => a.snrDb - b.snrDb)
  return rows
}

export function loadSweepCsv(file: string): SweepRow[] {
  let text: string
  try {
    text = readFileSync(file, 'utf8')
  } catch (err) {
    throw new CsvError(file, `cannot read: ${(err as Error).message}`)
  }
  return parseSweepCsv(file, text)
}

/** Default curve label from the sweep parameters. */
export function defaultLabel(rows: SweepRow[]): string {
  const r = rows[0]
  const parts = [`${r.metric}`, `N=${r.window}`, `${r.nRx}rx`, r.code]
  if (r.beta !== 1) parts.push(`beta=${r.beta}`)
  return parts.join(' ')
}
