"""Command-line front end.

    reclab expect   --dist exp:c=1 --i 1 --j 1 --u 1 --v 3
    reclab spacing  --dist weibull:alpha=0.5,c=1 --m 2 --n 3 --k 1 --r 1 --u 1 --v 4
    reclab simulate --dist exp:c=1 --records 5 --samples 1000 --seed 0
    reclab verify   --identity cor3 --dist weibull:alpha=0.5,c=1 --m 2 --n 3 --expect confirmed
    reclab classify --dist weibull:alpha=2,c=1
    reclab errata   --dist weibull:alpha=0.5,c=1
    reclab selftest --seed 0

Exit codes: 0 success, 1 ``--expect`` not met (or a failed selftest),
2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import enum
import json
import secrets
import sys

from . import acceptance, characterize, condmom, mfunc, report, simrec
from .errors import BudgetExceededError, DomainError, NumericalError, UsageError
from .hazard import parse_model

EXIT_OK, EXIT_EXPECT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(64)
    try:
        value = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer or 'random', got {text!r}") from None
    if value < 0 or value >= 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _g_spec(text: str):
    """id | poly:c0,c1,... | mono:p (the derivative h^(i+j-1) of x^p/p!)."""
    if text == "id":
        return ("id", None)
    head = text.partition(":")[0]
    if head == "poly":
        return ("poly", mfunc.parse_poly(text))
    if head == "mono":
        return ("mono", mfunc.parse_poly(text))
    raise UsageError(f"--g must be id, poly:c0,c1,... or mono:p, got {text!r}")


def _integrand(g_spec, i, j):
    kind, h = g_spec
    if kind == "id":
        return condmom.identity
    if kind == "poly":
        return condmom.poly_integrand(h)
    return condmom.h_derivative_integrand(h, i + j - 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reclab", description="Regression identities for record values.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, dist=True):
        if dist:
            p.add_argument("--dist", required=True, help="exp:c=<f>[,lf=<f>] | weibull:alpha=<f>,c=<f> | linquad")
        p.add_argument("--seed", type=_seed, default=0, help="64-bit seed or 'random' (default 0)")
        p.add_argument("--out", default="-", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("expect", help="E[g(R_n) | R_{n-i}=u, R_{n+j}=v]")
    common(p)
    for name in ("--i", "--j"):
        p.add_argument(name, type=_int, required=True)
    for name in ("--u", "--v"):
        p.add_argument(name, type=float, required=True)
    p.add_argument("--g", type=_g_spec, default=("id", None))
    p.add_argument("--method", choices=("quad", "mc"), default="quad")
    p.add_argument("--samples", type=_int, default=characterize.DEFAULT_MC_SAMPLES)

    p = sub.add_parser("spacing", help="E[R_n - R_m | R_{m-k}=u, R_{n+r}=v]")
    common(p)
    for name, default in (("--m", 2), ("--n", 3), ("--k", 1), ("--r", 1)):
        p.add_argument(name, type=_int, default=default)
    for name in ("--u", "--v"):
        p.add_argument(name, type=float, required=True)

    p = sub.add_parser("simulate", help="record paths as CSV")
    common(p)
    p.add_argument("--records", type=_int, default=5)
    p.add_argument("--samples", type=_int, default=1000)
    p.add_argument("--sampler", choices=("arrival", "naive"), default="arrival")
    p.add_argument("--max-iid-draws", type=_int, default=simrec.SimConfig().max_iid_draws)

    p = sub.add_parser("verify", help="scan one identity over a grid")
    common(p)
    p.add_argument("--identity", type=characterize.IdentityId.parse, required=True)
    for name, default in (("--k", 1), ("--r", 1), ("--m", 2), ("--n", 3)):
        p.add_argument(name, type=_int, default=default)
    p.add_argument("--p", type=_int, default=None)
    p.add_argument("--grid", type=characterize.GridSpec.parse, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--method", choices=("quad", "mc"), default="quad")
    p.add_argument("--samples", type=_int, default=characterize.DEFAULT_MC_SAMPLES)
    p.add_argument("--ordering", choices=[o.value for o in characterize.Ordering], default=None)
    p.add_argument("--expect", choices=("confirmed", "violated"), default=None)

    p = sub.add_parser("classify", help="Exponential / WeibullHalf / Neither")
    common(p)
    p.add_argument("--tol", type=float, default=characterize.DEFAULT_TOL_QUAD)
    p.add_argument("--grid", type=characterize.GridSpec.parse, default=None)

    p = sub.add_parser("errata", help="printed spacing constants against computed values")
    common(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--grid", type=characterize.GridSpec.parse, default=None)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    common(p, dist=False)
    return parser


def _write(args, payload: bytes) -> None:
    if args.out == "-":
        sys.stdout.write(payload.decode())
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(payload)


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], str):
        return value[0] if value[1] is None else str(value[1])
    if isinstance(value, characterize.GridSpec):
        return "default" if value.lo is None else f"{value.lo!r}:{value.hi!r}:{value.count}"
    return value


def _echo_config(args) -> None:
    """Resolved configuration, seed included, to stderr."""
    config = {key: _plain(val) for key, val in vars(args).items()}
    print("reclab config: " + json.dumps(config, sort_keys=True, default=str), file=sys.stderr)


def _cmd_expect(args) -> int:
    model = parse_model(args.dist)
    w = condmom.Window(args.i, args.j, args.u, args.v)
    g = _integrand(args.g, args.i, args.j)
    if args.method == "quad":
        value, stderr = condmom.conditional_expectation(model, w, g), None
    else:
        est = simrec.mc_conditional_expectation(model, w, g, simrec.SimConfig(args.seed, args.samples))
        value, stderr = est.mean, est.stderr
    if args.format == "json":
        payload = {"schema_version": report.SCHEMA_VERSION, "dist": model.spec, "i": args.i, "j": args.j,
                   "u": args.u, "v": args.v, "method": args.method, "seed": args.seed,
                   "value": value, "stderr": stderr}
        _write(args, report.dumps_json(payload).encode())
    else:
        text = repr(value) if stderr is None else f"{value!r} {stderr!r}"
        _write(args, (text + "\n").encode())
    return EXIT_OK


def _cmd_spacing(args) -> int:
    model = parse_model(args.dist)
    value = condmom.spacing_expectation(model, args.m, args.n, args.k, args.r, args.u, args.v)
    if args.format == "json":
        payload = {"schema_version": report.SCHEMA_VERSION, "dist": model.spec, "m": args.m, "n": args.n,
                   "k": args.k, "r": args.r, "u": args.u, "v": args.v, "value": value}
        _write(args, report.dumps_json(payload).encode())
    else:
        _write(args, (repr(value) + "\n").encode())
    return EXIT_OK


def _cmd_simulate(args) -> int:
    model = parse_model(args.dist)
    if args.format != "csv":
        raise UsageError("simulate writes CSV only")
    if args.sampler == "arrival":
        values = simrec.sample_record_paths(model, args.records, args.samples, args.seed)
        text = simrec.paths_to_csv(values)
    else:
        cfg = simrec.SimConfig(args.seed, args.samples, args.max_iid_draws)
        values, times = simrec.sample_records_naive_paths(model, args.records, args.samples, cfg)
        text = simrec.paths_to_csv(values, times)
    _write(args, text.encode())
    return EXIT_OK


def _cmd_verify(args) -> int:
    model = parse_model(args.dist)
    rep = characterize.scan(
        args.identity, model, args.grid, args.tol, args.method, args.seed,
        k=args.k, r=args.r, m=args.m, n=args.n, p=args.p,
        ordering=args.ordering, samples=args.samples,
    )
    _write(args, report.serialize_report(rep, args.format))
    print(f"{rep.identity.value} on {rep.dist}: {rep.verdict.value} "
          f"(max rel residual {rep.max_rel_residual:.3g}, runtime {rep.runtime_ms:.0f} ms)",
          file=sys.stderr)
    if args.expect and rep.verdict.value.lower() != args.expect:
        return EXIT_EXPECT
    return EXIT_OK


def _cmd_classify(args) -> int:
    model = parse_model(args.dist)
    result = characterize.classify_detailed(model, args.tol, args.grid)
    if args.format == "json":
        _write(args, report.dumps_json(report.classify_to_dict(result, model.spec)).encode())
    else:
        _write(args, (result.label.value + "\n").encode())
    return EXIT_OK


def _cmd_errata(args) -> int:
    model = parse_model(args.dist)
    rep = characterize.errata_report(model, args.grid, args.tol)
    _write(args, report.serialize_errata(rep, args.format))
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results, text = acceptance.selftest(args.seed)
    header = f"reclab selftest seed={args.seed}\n"
    if args.format == "json":
        payload = {
            "schema_version": report.SCHEMA_VERSION,
            "seed": args.seed,
            "criteria": [
                {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        _write(args, report.dumps_json(payload).encode())
    else:
        _write(args, (header + text).encode())
    return EXIT_OK if all(r.passed for r in results) else EXIT_EXPECT


COMMANDS = {
    "expect": _cmd_expect,
    "spacing": _cmd_spacing,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "classify": _cmd_classify,
    "errata": _cmd_errata,
    "selftest": _cmd_selftest,
}


def run(argv: list[str] | None = None) -> int:
    """Execute one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        _echo_config(args)
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"reclab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, BudgetExceededError) as exc:
        print(f"reclab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
