"""Command line front end.

Typical use:

    plots --in results.csv --x channel_eps --y p_hat --group decoder \
        --logy --out curve.png

Prints the per-group point counts, then the total, then the output path.
Exit code 2 means the input table was unusable (missing column, no data
rows, unreadable file).
"""

import argparse
import sys
from typing import Optional, Sequence

from . import CurveSpec, PlotError, plot_bars, plot_curves


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render simulation CSV output as curves or bar charts.")
    parser.add_argument("--in", dest="path", required=True,
                        help="input CSV file")
    parser.add_argument("--x", default="channel_eps",
                        help="x-axis column (default channel_eps, derived "
                             "from the channel column)")
    parser.add_argument("--y", default="p_hat", help="y-axis column")
    parser.add_argument("--group", default=None,
                        help="column whose values split the rows into lines")
    parser.add_argument("--logy", action="store_true",
                        help="log-scale the y axis")
    parser.add_argument("--kind", choices=("curve", "bars"), default="curve",
                        help="curve (default) or one bar per row")
    parser.add_argument("--out", required=True, help="output image file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    spec = CurveSpec(path=args.path, x=args.x, y=args.y, group=args.group,
                     logy=args.logy, out=args.out)
    try:
        if args.kind == "curve":
            counts = plot_curves(spec)
        else:
            counts = plot_bars(spec)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for label in sorted(counts):
        print(f"group {label}: {counts[label]} points")
    print(f"total points: {sum(counts.values())}")
    print(f"wrote {spec.out}")
    return 0
