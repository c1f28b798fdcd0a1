#!/usr/bin/env python3
"""Reproduce all three experiments: sweep CSVs plus rendered figures.

    python scripts/run_figures.py --out results --trials 5000 --threads 2

Rendering needs the irsim-plots package (plots/ directory) installed;
without it the script still writes the CSVs.
"""

import argparse
import os
import sys

from irsim.engine import run_sweep, with_overrides, write_csv
from irsim.presets import PRESET_NAMES, get_preset


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    try:
        from irsim_plots.render import FigureSpec, render
    except ImportError:
        render = None
        print("irsim-plots not installed, writing CSVs only", file=sys.stderr)

    for name in PRESET_NAMES:
        cfg = with_overrides(get_preset(name), seed=args.seed, trials=args.trials)
        points = run_sweep(cfg, workers=args.threads)
        csv_path = os.path.join(args.out, f"{name}.csv")
        with open(csv_path, "wb") as fh:
            rows = write_csv(points, fh)
        print(f"{name}: {rows} rows -> {csv_path}")
        if render is not None:
            png_path = os.path.join(args.out, f"{name}.png")
            result = render(FigureSpec(name, csv_path, png_path))
            print(f"{name}: {result.curves} curves -> {png_path}")


if __name__ == "__main__":
    main()
