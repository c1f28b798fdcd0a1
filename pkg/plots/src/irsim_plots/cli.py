"""Command-line front end for figure rendering.

Exit codes mirror the simulator CLI: 0 success, 2 schema/flag errors,
3 file errors.
"""

import argparse
import sys

from .render import FIGURE_IDS, FigureSpec, SchemaError, render

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_IO = 3


def _build_parser():
    parser = argparse.ArgumentParser(prog="irsim-plots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="render one figure from a sweep CSV")
    r.add_argument("--figure", choices=FIGURE_IDS, required=True)
    r.add_argument("--csv", required=True, help="input sweep CSV path")
    r.add_argument("--out", required=True, help="output image path (.png or .svg)")
    r.add_argument("--threshold", type=float, default=4.0,
                   help="requirement line in bpcu (common-rate figure only)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = FigureSpec(args.figure, args.csv, args.out, args.threshold)
        result = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    extra = " + threshold line" if result.threshold_line else ""
    print(f"rendered {result.curves} curves{extra} to {result.output_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
