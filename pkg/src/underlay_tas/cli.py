"""Command line front-end.

    underlay-tas sweep CONFIG [--seed S] [--trials N] [--crn on|off] [--out PATH]
    underlay-tas validate [--quick] [--seed S]

Exit status: 0 success, 1 a validation check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .model import ParameterError
from .sweep import ConfigError, format_summary, load_config, run_sweep, write_csv

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed {text} is not an unsigned 64-bit integer")
    return v


def _on_off(text: str) -> bool:
    t = text.lower()
    if t not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return t == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="underlay-tas",
        description="Antenna selection for underlay cognitive radio: closed forms and Monte-Carlo.")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate a parameter sweep and write CSV")
    sw.add_argument("config", help="INI file with [params], [sweep] and optional [sim] sections")
    sw.add_argument("--seed", type=_u64, help="master seed (overrides [sim] seed)")
    sw.add_argument("--trials", type=int, help="Monte-Carlo trials (overrides [sim] trials)")
    sw.add_argument("--crn", type=_on_off, help="common random numbers across schemes: on|off")
    sw.add_argument("--out", help="CSV output path (default: stdout)")
    sw.add_argument("--quiet", action="store_true", help="suppress the summary on stderr")

    va = sub.add_parser("validate", help="run the analytic / Monte-Carlo consistency suite")
    va.add_argument("--quick", action="store_true", help="fewer trials and samples")
    va.add_argument("--seed", type=_u64, default=None, help="master seed for all random checks")
    return parser


def _cmd_sweep(args) -> int:
    try:
        spec = load_config(args.config, seed=args.seed, trials=args.trials, crn=args.crn)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    rows = run_sweep(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    if not args.quiet:
        sys.stderr.write(format_summary(spec, rows))
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .validation import DEFAULT_SEED, run_all

    seed = DEFAULT_SEED if args.seed is None else args.seed
    mode = "quick" if args.quick else "full"
    print(f"validation ({mode}, seed {seed})")
    results = run_all(quick=args.quick, seed=seed, echo=lambda line: print(line, flush=True))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION_FAILED if failed else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep":
        return _cmd_sweep(args)
    return _cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
