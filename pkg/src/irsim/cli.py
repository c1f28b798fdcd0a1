"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration or flags, 3 I/O failure,
4 too many degenerate channel redraws.
"""

import argparse
import json
import os
import sys

from .engine import run_sweep, with_overrides, write_csv, config_from_dict, SCENARIO_SCHEMA
from .errors import ConfigError, DegenerateTrialsError, SimulatorError
from .presets import PRESET_DOCS, PRESET_NAMES, get_preset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4


def _build_parser():
    parser = argparse.ArgumentParser(prog="irsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_options(p):
        p.add_argument("--seed", type=int, default=None, help="master seed (default: preset value or IRSIM_SEED)")
        p.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials per SNR point")
        p.add_argument("--out", default=None, help="output CSV path (default ./results/<name>.csv)")
        p.add_argument("--threads", type=int, default=None, help="worker count (default: available cores)")
        p.add_argument("--tdma-mode", choices=("orthogonal", "simultaneous"), default=None)
        p.add_argument("--quiet", action="store_true", help="suppress the summary table")

    run = sub.add_parser("run", help="run a custom scenario file")
    run.add_argument("scenario", help="path to a scenario JSON document")
    add_run_options(run)
    for name in PRESET_NAMES:
        p = sub.add_parser(name, help=f"run the shipped {name} preset ({PRESET_DOCS[name]})")
        add_run_options(p)
    cal = sub.add_parser("calibrate", help="search the two calibration constants")
    cal.add_argument("--trials", type=int, default=400, help="trials per candidate evaluation")
    cal.add_argument("--seed", type=int, default=None)
    cal.add_argument("--quiet", action="store_true")
    sub.add_parser("list-presets", help="list shipped presets")
    sub.add_parser("schema", help="print the scenario JSON schema")
    return parser


def _load_scenario(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario: not valid JSON ({exc})") from exc
    return config_from_dict(doc)


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("IRSIM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"IRSIM_SEED: not an integer ({env!r})")
    return None


def _summary(points, stream):
    """Per curve: rate at the lowest and highest SNR point."""
    curves = {}
    for p in points:
        curves.setdefault((p.scheme, p.metric, p.alpha_c), []).append(p)
    stream.write(f"{'curve':<44} {'low SNR':>14} {'high SNR':>14}\n")
    for (scheme, metric, alpha), pts in curves.items():
        pts.sort(key=lambda p: p.snr_db)
        name = scheme if alpha is None else f"{scheme} (alpha_c={alpha:g})"
        lo, hi = pts[0], pts[-1]
        stream.write(
            f"{name + ' ' + metric:<44} {lo.mean_bpcu:>7.3f} @ {lo.snr_db:<4g} {hi.mean_bpcu:>7.3f} @ {hi.snr_db:<4g}\n"
        )


def _run_command(name, cfg, args):
    seed = _resolve_seed(args)
    cfg = with_overrides(cfg, seed=seed, trials=args.trials, tdma_mode=args.tdma_mode)
    workers = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise ConfigError("--threads: must be at least 1")
    points = run_sweep(cfg, workers=workers)
    out = args.out or os.path.join("results", f"{name}.csv")
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "wb") as fh:
        rows = write_csv(points, fh)
    if not args.quiet:
        _summary(points, sys.stdout)
        print(f"wrote {rows} rows to {out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in PRESET_NAMES:
                print(f"{name}: {PRESET_DOCS[name]}")
            return EXIT_OK
        if args.command == "schema":
            for key, doc in SCENARIO_SCHEMA.items():
                print(f"{key}: {doc}")
            return EXIT_OK
        if args.command == "calibrate":
            from .calibrate import run_calibration

            run_calibration(trials=args.trials, seed=args.seed, quiet=args.quiet)
            return EXIT_OK
        if args.command == "run":
            cfg = _load_scenario(args.scenario)
            name = os.path.splitext(os.path.basename(args.scenario))[0]
            return _run_command(name, cfg, args)
        cfg = get_preset(args.command)
        return _run_command(args.command, cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateTrialsError as exc:
        print(f"degenerate channels: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SimulatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
