#!/usr/bin/env python3
"""Run every shipped figure config and write one CSV per config.

    python3 scripts/reproduce_figures.py [--out results] [--trials N] [--seed S]
"""

import argparse
import sys
import time
from pathlib import Path

from underlay_tas.sweep import load_config, run_sweep, write_csv

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results", help="output directory (default: results)")
    ap.add_argument("--trials", type=int, help="override Monte-Carlo trials in every config")
    ap.add_argument("--seed", type=int, help="override the master seed in every config")
    ap.add_argument("--configs", default=str(CONFIG_DIR), help="directory of .ini files")
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    configs = sorted(Path(args.configs).glob("*.ini"))
    if not configs:
        print(f"no .ini files in {args.configs}", file=sys.stderr)
        return 2
    for cfg in configs:
        t0 = time.perf_counter()
        spec = load_config(cfg, trials=args.trials, seed=args.seed)
        rows = run_sweep(spec)
        target = out / f"{cfg.stem}.csv"
        with open(target, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
        print(f"{cfg.name}: {len(rows)} rows -> {target} ({time.perf_counter() - t0:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
