"""Compare exact bridge draws with records taken from simulated full paths.

Full paths are simulated, those with R_{n-i} and R_{n+j} in bins around
(u, v) are kept, and the kept R_n is compared with a bridge draw at the
path's own covariates.  Also reports the binned mean next to the quadrature
value at the bin centre.

    python3 scripts/bridge_vs_path.py --dist weibull:alpha=0.5,c=1 --n 3 --i 1 --j 2 --u 1 --v 6
"""

import argparse
import math

import numpy as np

from reclab import condmom, simrec
from reclab.condmom import Window
from reclab.hazard import parse_model


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dist", default="weibull:alpha=0.5,c=1")
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--i", type=int, default=1)
    parser.add_argument("--j", type=int, default=2)
    parser.add_argument("--u", type=float, default=1.0)
    parser.add_argument("--v", type=float, default=6.0)
    parser.add_argument("--halfwidth", type=float, default=0.25, help="relative bin half-width")
    parser.add_argument("--paths", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    model = parse_model(args.dist)
    lo_idx, hi_idx = args.n - args.i, args.n + args.j
    if lo_idx < 1:
        parser.error("need n - i >= 1")
    paths = simrec.sample_record_paths(model, hi_idx, args.paths, args.seed)
    lo, mid, hi = paths[:, lo_idx - 1], paths[:, args.n - 1], paths[:, hi_idx - 1]
    keep = (np.abs(lo - args.u) <= args.halfwidth * args.u) & (np.abs(hi - args.v) <= args.halfwidth * args.v)
    kept = int(keep.sum())
    if kept < 100:
        raise SystemExit(f"only {kept} paths in the bins; widen them or simulate more")

    keys = simrec.draw_seeds(args.seed + 1, kept) ^ np.uint64(simrec.BRIDGE_TAG)
    bridge = np.array([
        simrec._bridge_values(model, Window(args.i, args.j, a, b), keys[q:q + 1])[0]
        for q, (a, b) in enumerate(zip(lo[keep], hi[keep]))
    ])
    diff = mid[keep] - bridge
    se = diff.std(ddof=1) / math.sqrt(kept)
    quad = condmom.conditional_expectation(model, Window(args.i, args.j, args.u, args.v))
    print(f"{kept} of {args.paths} paths in the bins")
    print(f"binned path mean of R_{args.n}:   {mid[keep].mean():.6f}")
    print(f"bridge mean at path covariates: {bridge.mean():.6f}")
    print(f"paired difference: {diff.mean():+.6f} +/- {se:.6f} (z = {diff.mean() / se:+.2f})")
    print(f"quadrature at bin centre:       {quad:.6f}")


if __name__ == "__main__":
    main()
