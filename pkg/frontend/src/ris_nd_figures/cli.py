"""Batch figure renderer for ris-nd result CSVs."""
from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, SchemaError, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="ris-nd-figures", description=__doc__)
    p.add_argument("figure_id", help="|".join(FIGURE_IDS))
    p.add_argument("csv", nargs="+", help="result CSV files (MC and/or theory)")
    p.add_argument("--out", default="figures")
    args = p.parse_args(argv)
    try:
        for path in render(args.figure_id, args.csv, args.out):
            print(f"wrote {path}")
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
