"""Scan every identity on the three shipped families and tabulate verdicts.

    python3 scripts/scan_all_identities.py [--seed 0] [--out verdicts.csv]
"""

import argparse
import csv
import sys

from reclab import characterize as ch
from reclab import hazard
from reclab.errors import UsageError

MODELS = (hazard.exponential(1.0), hazard.weibull(0.5, 1.0), hazard.weibull(2.0, 1.0),
          hazard.linear_quadratic())

# one representative parameter set per identity
PARAMS = {
    ch.IdentityId.ADJ_MEAN: {},
    ch.IdentityId.BAP05: {"p": 3},
    ch.IdentityId.YAB08: {"k": 2},
    ch.IdentityId.WEIGHTS: {"k": 3},
    ch.IdentityId.WEIGHTS2: {"r": 3},
    ch.IdentityId.NEC_YAB: {"k": 2, "r": 2},
    ch.IdentityId.THM1: {"k": 2, "r": 2},
    ch.IdentityId.COR1: {"k": 2, "r": 2},
    ch.IdentityId.AN: {},
    ch.IdentityId.THM2: {"k": 1, "r": 1},
    ch.IdentityId.COR2: {"k": 1, "r": 1},
    ch.IdentityId.COR3: {"m": 2, "n": 4},
    ch.IdentityId.SUMSPEC: {"m": 2, "n": 4},
    ch.IdentityId.THM3: {"k": 1, "r": 1},
    ch.IdentityId.COR4: {"m": 2, "n": 4},
    ch.IdentityId.LEMMA1: {},
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["identity", "params", "dist", "verdict", "max_rel_residual"])
    for ident, params in PARAMS.items():
        for model in MODELS:
            try:
                rep = ch.scan(ident, model, seed=args.seed, **params)
            except UsageError as exc:
                writer.writerow([ident.value, params, model.spec, "SKIPPED", str(exc)])
                continue
            writer.writerow([ident.value, params, model.spec, rep.verdict.value,
                             f"{rep.max_rel_residual:.3e}"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
