import { SweepRow, defaultLabel } from './csv'

export interface CurveSpec {
  file: string
  rows: SweepRow[]
  label?: string
  styleIndex: number
}

const WIDTH = 760
const HEIGHT = 540
const MARGIN = { top: 48, right: 28, bottom: 56, left: 76 }

const COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#17becf', '#7f7f7f']
const MARKERS = ['circle', 'square', 'diamond', 'triangle'] as const

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;')
}

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString()
}

/** Zero BLER cannot sit on a log axis; floor it at the rule-of-three level. */
export function plottedBler(row: SweepRow): { y: number; floored: boolean } {
  if (row.bler > 0) return { y: row.bler, floored: false }
  return { y: 1 / (3 * Math.max(1, row.frames)), floored: true }
}

function marker(kind: (typeof MARKERS)[number], x: number, y: number,
                color: string, open: boolean): string {
  const fill = open ? 'white' : color
  const r = 4
  switch (kind) {
    case 'circle':
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}" stroke="${color}" stroke-width="1.4"/>`
    case 'square':
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${2 * r}" height="${2 * r}" fill="${fill}" stroke="${color}" stroke-width="1.4"/>`
    case 'diamond':
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y)} L ${fmt(x)} ${fmt(y + r + 1)} L ${fmt(x - r - 1)} ${fmt(y)} Z" fill="${fill}" stroke="${color}" stroke-width="1.4"/>`
    case 'triangle':
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y + r)} L ${fmt(x - r - 1)} ${fmt(y + r)} Z" fill="${fill}" stroke="${color}" stroke-width="1.4"/>`
  }
}

/** Semilog-y BLER plot; returns a deterministic standalone SVG string. */
export function renderSvg(curves: CurveSpec[], title: string): string {
  if (curves.length === 0) throw new Error('at least one curve is required')

  const allX: number[] = []
  const allY: number[] = []
  for (const c of curves) {
    for (const row of c.rows) {
      allX.push(row.snrDb)
      const { y } = plottedBler(row)
      allY.push(y)
      if (row.ciLow > 0) allY.push(row.ciLow)
      if (row.ciHigh > 0) allY.push(row.ciHigh)
    }
  }
  const xMin = Math.min(...allX)
  const xMax = Math.max(...allX)
  const xPad = xMax > xMin ? 0.04 * (xMax - xMin) : 0.5
  const yMinExp = Math.floor(Math.log10(Math.min(...allY)))
  const yMaxExp = Math.ceil(Math.log10(Math.max(1e-12, Math.max(...allY))))

  const plotW = WIDTH - MARGIN.left - MARGIN.right
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom
  const sx = (v: number) =>
    MARGIN.left + ((v - (xMin - xPad)) / (xMax + xPad - (xMin - xPad))) * plotW
  const sy = (v: number) =>
    MARGIN.top + ((yMaxExp - Math.log10(v)) / (yMaxExp - yMinExp)) * plotH

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  )
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`)
  parts.push(
    `<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="15">${esc(title)}</text>`,
  )

  // y grid: one line per decade
  for (let e = yMinExp; e <= yMaxExp; e++) {
    const y = sy(10 ** e)
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${WIDTH - MARGIN.right}" y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    )
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">1e${e}</text>`,
    )
  }
  // x ticks at integer dB steps (or finer if the span is small)
  const span = xMax + xPad - (xMin - xPad)
  const step = span <= 3 ? 0.5 : 1
  const first = Math.ceil((xMin - xPad) / step) * step
  for (let v = first; v <= xMax + xPad + 1e-9; v += step) {
    const x = sx(v)
    parts.push(
      `<line x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" y2="${HEIGHT - MARGIN.bottom}" stroke="#eeeeee" stroke-width="1"/>`,
    )
    parts.push(
      `<text x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" font-size="11">${Number(v.toFixed(2))}</text>`,
    )
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333333"/>`,
  )
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">Es/N0 per RE (dB)</text>`,
  )
  parts.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">Block error rate</text>`,
  )

  for (const curve of curves) {
    const color = COLORS[curve.styleIndex % COLORS.length]
    const mk = MARKERS[curve.styleIndex % MARKERS.length]
    const pts = curve.rows.map((row) => {
      const { y, floored } = plottedBler(row)
      return { row, px: sx(row.snrDb), py: sy(y), floored }
    })
    const path = pts
      .map((p, i) => `${i === 0 ? 'M' : 'L'} ${fmt(p.px)} ${fmt(p.py)}`)
      .join(' ')
    parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.6"/>`)
    for (const p of pts) {
      if (p.row.ciLow > 0 && p.row.ciHigh > 0 && !p.floored) {
        const yLo = sy(p.row.ciLow)
        const yHi = sy(p.row.ciHigh)
        parts.push(
          `<line x1="${fmt(p.px)}" y1="${fmt(yHi)}" x2="${fmt(p.px)}" y2="${fmt(yLo)}" stroke="${color}" stroke-width="1"/>`,
        )
        parts.push(
          `<line x1="${fmt(p.px - 3)}" y1="${fmt(yHi)}" x2="${fmt(p.px + 3)}" y2="${fmt(yHi)}" stroke="${color}" stroke-width="1"/>`,
        )
        parts.push(
          `<line x1="${fmt(p.px - 3)}" y1="${fmt(yLo)}" x2="${fmt(p.px + 3)}" y2="${fmt(yLo)}" stroke="${color}" stroke-width="1"/>`,
        )
      }
      // floored (zero-BLER) points get an open marker
      parts.push(marker(mk, p.px, p.py, color, p.floored))
    }
  }

  // legend, top right inside the frame
  const legendX = WIDTH - MARGIN.right - 240
  let legendY = MARGIN.top + 14
  for (const curve of curves) {
    const color = COLORS[curve.styleIndex % COLORS.length]
    const mk = MARKERS[curve.styleIndex % MARKERS.length]
    const label = curve.label ?? defaultLabel(curve.rows)
    parts.push(
      `<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 26}" y2="${legendY - 4}" stroke="${color}" stroke-width="1.6"/>`,
    )
    parts.push(marker(mk, legendX + 13, legendY - 4, color, false))
    parts.push(
      `<text x="${legendX + 34}" y="${legendY}" font-size="12" class="legend-label">${esc(label)}</text>`,
    )
    legendY += 18
  }

  parts.push('</svg>')
  return parts.join('\n')
}
