"""Command line front end: render figures from experiment csv tables."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamshare-plots",
        description="Render figures from beamshare experiment csv output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render one figure from csv tables")
    p.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    p.add_argument(
        "--in",
        dest="inputs",
        required=True,
        nargs="+",
        type=Path,
        metavar="CSV",
        help="input csv files (tau-cdf also takes a bounds csv)",
    )
    p.add_argument("--out", required=True, type=Path, help="output image path")
    p.add_argument(
        "--label",
        action="append",
        default=[],
        help="series label, repeat once per data csv (default: file names)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(
            FigureSpec(
                inputs=tuple(args.inputs),
                kind=args.kind,
                out=args.out,
                labels=tuple(args.label),
            )
        )
    except ValueError as e:
        print(f"plot error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - unexpected
        print(f"error: {e}", file=sys.stderr)
        return 3
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
