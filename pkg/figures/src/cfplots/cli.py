"""Command line for rendering cfmimo result files.

    cfmimo-plot --kind cdf --in out/results.csv --out fig.png --column net_cf
    cfmimo-plot --kind heatmap --in out/pilot_sweep.csv --out sweep.png
    cfmimo-plot --kind convergence --in out/sca_trace.csv --out trace.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, PlotSpec, render


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "plot":  # tolerate an explicit subcommand token
        argv = argv[1:]
    parser = argparse.ArgumentParser(prog="cfmimo-plot", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="input_path", required=True, type=Path)
    parser.add_argument("--out", dest="output_path", required=True, type=Path)
    parser.add_argument("--column", default="net_cf",
                        help="results column for the cdf kind")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    parser.add_argument("--title")
    parser.add_argument("--dpi", type=int, default=120)
    args = parser.parse_args(argv)
    spec = PlotSpec(kind=args.kind, input_path=args.input_path,
                    output_path=args.output_path, column=args.column,
                    xlabel=args.xlabel, ylabel=args.ylabel, title=args.title,
                    dpi=args.dpi)
    out = render(spec)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
