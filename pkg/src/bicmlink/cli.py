"""Command-line front end for BLER sweeps.

Options may come from a flat ``key = value`` config file (# comments
allowed); explicit command-line flags override file values.  Exit codes:
0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .core import CODES, ConfigError, METRICS, SimConfig
from .harness import results_to_csv, run_sweep

_FLAG_TYPES = {
    "code": str,
    "metric": str,
    "window": int,
    "alpha": float,
    "beta": float,
    "rx": int,
    "prb": int,
    "dmrs_per_prb": int,
    "payload": int,
    "crc_len": int,
    "list_size": int,
    "bp_iters": int,
    "snr": str,
    "max_frames": int,
    "max_errors": int,
    "seed": int,
    "out": str,
    "ldpc_alist": str,
    "workers": int,
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bicmlink",
        description="Monte-Carlo BLER sweeps for short-blocklength BICM links",
    )
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--code", choices=CODES)
    p.add_argument("--metric", choices=METRICS)
    p.add_argument("--window", type=int, help="detection window size N")
    p.add_argument("--alpha", type=float, help="LOS power fraction in [0, 1]")
    p.add_argument("--beta", type=float, help="DMRS amplitude scale")
    p.add_argument("--rx", type=int, help="receive antenna count")
    p.add_argument("--prb", type=int, help="number of PRBs")
    p.add_argument("--dmrs-per-prb", type=int, dest="dmrs_per_prb")
    p.add_argument("--payload", type=int, help="payload bits A")
    p.add_argument("--crc-len", type=int, dest="crc_len")
    p.add_argument("--list-size", type=int, dest="list_size")
    p.add_argument("--bp-iters", type=int, dest="bp_iters")
    p.add_argument("--snr", help="START:STOP:STEP in dB")
    p.add_argument("--max-frames", type=int, dest="max_frames")
    p.add_argument("--max-errors", type=int, dest="max_errors")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--ldpc-alist", dest="ldpc_alist")
    p.add_argument("--workers", type=int, help="worker processes (result-invariant)")
    return p


def parse_config_file(text: str) -> dict:
    """Flat key = value lines; # starts a comment; keys match flag names."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key not in _FLAG_TYPES:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _FLAG_TYPES[key](val)
        except ValueError:
            raise ConfigError(
                f"config line {lineno}: bad value {val!r} for {key}"
            ) from None
    return values


def parse_snr_spec(spec: str) -> tuple[float, ...]:
    parts = spec.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise ConfigError(f"--snr must be START:STOP:STEP, got {spec!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise ConfigError(f"--snr must be numeric, got {spec!r}") from None
    if step <= 0:
        raise ConfigError("--snr step must be positive")
    if stop < start:
        raise ConfigError("--snr stop must be >= start")
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + k * step, 9) for k in range(count))


def build_config(opts: dict) -> SimConfig:
    kw = {}
    rename = {
        "window": "window_size",
        "beta": "beta_pwr",
        "rx": "n_rx",
        "prb": "n_prb",
        "payload": "payload_bits",
    }
    for key, val in opts.items():
        if val is None or key in ("config", "out", "workers"):
            continue
        if key == "snr":
            kw["snr_grid"] = parse_snr_spec(val)
        else:
            kw[rename.get(key, key)] = val
    return SimConfig(**kw)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    opts = vars(args)
    try:
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    file_opts = parse_config_file(fh.read())
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return 3
            merged = dict(file_opts)
            merged.update({k: v for k, v in opts.items() if v is not None})
            opts = {**{k: None for k in opts}, **merged}
        cfg = build_config(opts)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        results = run_sweep(cfg, workers=opts.get("workers") or 1)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    csv_text = results_to_csv(results, cfg)
    out_path = opts.get("out")
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(csv_text)
        except OSError as exc:
            print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
            return 3
    else:
        sys.stdout.write(csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
