"""Command line front end: groupflow-plot <kind> --in FILES --out PATH."""

from __future__ import annotations

import argparse
import os
import sys

os.environ.setdefault("MPLBACKEND", "Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .figures import FIGURE_KINDS, FigureSpec, render  # noqa: E402


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupflow-plot",
        description="Render figures from groupflow CSV/JSON output files.")
    parser.add_argument("kind", choices=FIGURE_KINDS,
                        help="which figure to draw")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="FILE", help="input CSV/JSON files")
    parser.add_argument("--out", required=True,
                        help="output image (.png, .svg, or no suffix for both)")
    parser.add_argument("--title", help="figure title override")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs),
                          out=args.out, title=args.title, dpi=args.dpi)
        result = render(spec)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    plt.close(result.figure)
    for path in result.written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
