import { execFileSync } from 'child_process'
import { existsSync, mkdtempSync, readFileSync, statSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { describe, expect, it } from 'vitest'

import { main, splitCurveArg } from '../src/cli'

const HEADER =
  'snr_db,frames,errors,bler,ci_low,ci_high,metric,window,alpha,beta,n_rx,code,seed'

function writeCsv(dir: string, name: string, metric = 'noncoh-maxlog'): string {
  const path = join(dir, name)
  writeFileSync(path, [
    HEADER,
    `0,2000,200,0.1,0.0875,0.114,${metric},4,1,1,2,polar,1`,
    `1,2000,40,0.02,0.0147,0.0271,${metric},4,1,1,2,polar,1`,
    `2,2000,2,0.001,0.000275,0.00364,${metric},4,1,1,2,polar,1`,
  ].join('\n'))
  return path
}

describe('splitCurveArg', () => {
  it('splits label after the csv suffix', () => {
    expect(splitCurveArg('a.csv:nice label')).toEqual({
      file: 'a.csv',
      label: 'nice label',
    })
    expect(splitCurveArg('/tmp/x/a.csv')).toEqual({ file: '/tmp/x/a.csv' })
    expect(splitCurveArg('plain.csv')).toEqual({ file: 'plain.csv' })
  })
})

describe('plot cli', () => {
  it('renders one svg per invocation with a legend per curve', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plotcli-'))
    const a = writeCsv(dir, 'a.csv', 'perfect-csi')
    const b = writeCsv(dir, 'b.csv', 'noncoh-maxlog')
    const out = join(dir, 'plot.svg')
    const rc = main(['--out', out, '--title', 'Fig 3 analog', a, `${b}:N=4 joint`])
    expect(rc).toBe(0)
    const svg = readFileSync(out, 'utf8')
    expect((svg.match(/class="legend-label"/g) ?? []).length).toBe(2)
    expect(svg).toContain('Fig 3 analog')
  })

  it('writes png when asked', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plotcli-'))
    const a = writeCsv(dir, 'a.csv')
    const out = join(dir, 'plot.png')
    expect(main(['--out', out, a])).toBe(0)
    expect(existsSync(out)).toBe(true)
    expect(statSync(out).size).toBeGreaterThan(1000)
    // png magic bytes
    const head = readFileSync(out).subarray(0, 8)
    expect([...head]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a])
  })

  it('fails with the filename on malformed csv', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plotcli-'))
    const bad = join(dir, 'broken.csv')
    writeFileSync(bad, 'not,a,sweep\n1,2,3\n')
    const rc = main(['--out', join(dir, 'x.svg'), bad])
    expect(rc).toBe(2)
  })

  it('fails on missing file', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plotcli-'))
    expect(main(['--out', join(dir, 'x.svg'), join(dir, 'nope.csv')])).toBe(2)
  })

  it('fails with usage when no inputs', () => {
    expect(main([])).toBe(1)
    expect(main(['--out', 'x.svg'])).toBe(1)
  })

  it('runs as a compiled executable', () => {
    const dir = mkdtempSync(join(tmpdir(), 'plotcli-'))
    const a = writeCsv(dir, 'a.csv')
    const out = join(dir, 'exe.svg')
    execFileSync('node', [join(__dirname, '..', 'dist', 'cli.js'),
                          '--out', out, a])
    expect(existsSync(out)).toBe(true)
    let failed = false
    try {
      execFileSync('node', [join(__dirname, '..', 'dist', 'cli.js'),
                            '--out', join(dir, 'y.svg'),
                            join(dir, 'missing.csv')], { stdio: 'pipe' })
    } catch {
      failed = true
    }
    expect(failed).toBe(true)
  })
})
