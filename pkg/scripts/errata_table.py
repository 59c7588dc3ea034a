"""Printed spacing constants against computed values, as a readable table.

    python3 scripts/errata_table.py [--dist weibull:alpha=0.5,c=1]
"""

import argparse

from reclab import characterize as ch
from reclab.hazard import parse_model


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dist", default="weibull:alpha=0.5,c=1")
    parser.add_argument("--max-k", type=int, default=3)
    parser.add_argument("--max-r", type=int, default=3)
    args = parser.parse_args()

    rep = ch.errata_report(parse_model(args.dist), max_k=args.max_k, max_r=args.max_r)
    print(f"{rep.dist}  grid {rep.grid}  tol {rep.tol:g}")
    print(f"{'check':6} {'k':>2} {'r':>2} {'m':>2} {'n':>2} {'printed':>9} {'min':>12} {'max':>12}  status")
    for row in rep.rows:
        print(f"{row.check:6} {row.k:2d} {row.r:2d} {row.m:2d} {row.n:2d} {row.printed:9.4f} "
              f"{row.computed_min:12.8f} {row.computed_max:12.8f}  {row.status.value}")


if __name__ == "__main__":
    main()
