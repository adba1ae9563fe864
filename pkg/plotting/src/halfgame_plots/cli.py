"""Command-line chart renderer for halfgame sweep files.

Exit codes: 0 on success, 1 on schema mismatch, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .plots import PlotSpec, plot_rounds, plot_sweep
from .reader import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halfgame-plot",
        description="Render halfgame sweep CSVs into charts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    curves = sub.add_parser(
        "curves", help="win probability vs bias with confidence bands"
    )
    curves.add_argument("--csv", action="append", required=True,
                        help="sweep CSV (repeatable)")
    curves.add_argument("--out", required=True, help="output image (.png/.svg)")
    curves.add_argument(
        "--overlay",
        default="auto",
        help="'auto' marks the asymptotic threshold from the sidecar, "
        "'none' omits it, a number draws a custom vertical line",
    )
    curves.add_argument(
        "--raw-bias", action="store_true",
        help="plot raw bias instead of bias/n",
    )
    curves.add_argument("--title", default=None)

    rounds = sub.add_parser("rounds", help="winning round counts vs n")
    rounds.add_argument("--csv", action="append", required=True)
    rounds.add_argument("--out", required=True)
    rounds.add_argument("--title", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "curves":
            overlay_auto = args.overlay == "auto"
            overlay_value = None
            if args.overlay not in ("auto", "none"):
                try:
                    overlay_value = float(args.overlay)
                except ValueError:
                    parser.exit(2, f"error: bad --overlay {args.overlay!r}\n")
            spec = PlotSpec(
                input_paths=args.csv,
                output_path=args.out,
                overlay_threshold=overlay_value,
                overlay_auto=overlay_auto,
                normalize_bias=not args.raw_bias,
                title=args.title,
            )
            curves = plot_sweep(spec)
            print(f"wrote {args.out} ({len(curves)} curves)")
        else:
            points = plot_rounds(args.csv, args.out, title=args.title)
            print(f"wrote {args.out} ({len(points)} points)")
        return 0
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
