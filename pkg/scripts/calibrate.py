#!/usr/bin/env python3
"""Run the one-time calibration search and print the frozen constants.

Equivalent to ``irsim calibrate``; kept as a script so the search that
produced the shipped preset constants stays reproducible:

    python scripts/calibrate.py --trials 1500 --workers 2
"""

import argparse

from irsim.calibrate import D0_GRID, RHO_GRID, run_calibration


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=400)
    parser.add_argument("--seed", type=int, default=424242)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--d0", type=float, nargs="*", default=list(D0_GRID))
    parser.add_argument("--rho", type=float, nargs="*", default=list(RHO_GRID))
    args = parser.parse_args()
    run_calibration(
        trials=args.trials,
        seed=args.seed,
        d0_grid=tuple(args.d0),
        rho_grid=tuple(args.rho),
        workers=args.workers,
    )


if __name__ == "__main__":
    main()
