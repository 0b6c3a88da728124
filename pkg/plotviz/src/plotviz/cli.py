"""plotviz command line entry point.

    plotviz --in a.csv b.csv --group code,constellation --metric ber \\
        --out fig1.png
"""

import argparse
import sys

from .core import EmptySeriesError, MissingColumnError, PlotSpec, render


def build_parser():
    p = argparse.ArgumentParser(
        prog="plotviz",
        description="Render log-scale BER/PEP curves from sweep CSVs")
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="CSV", help="input CSV files")
    p.add_argument("--group", default="code",
                   help="comma-separated legend/grouping columns "
                        "(default: code)")
    p.add_argument("--metric", default="ber",
                   help="y-axis column (default: ber)")
    p.add_argument("--out", default="figure.png", help="output image path")
    p.add_argument("--title", default="", help="optional figure title")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = PlotSpec(inputs=tuple(args.inputs),
                    group_keys=tuple(k.strip() for k in
                                     args.group.split(",") if k.strip()),
                    metric=args.metric, out=args.out, title=args.title)
    try:
        series = render(spec)
    except (MissingColumnError, EmptySeriesError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wrote {spec.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
