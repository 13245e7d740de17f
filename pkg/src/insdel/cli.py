"""Command-line interface: build, encode, corrupt, decode, verify, experiment, replay.

Errors are reported as one line on stderr::

    error: kind=<ExceptionName> message=<text>

Exit status is 2 for decoding failures (including contract violations), 1 for
any other failure and 0 on success.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import highrate, listconcat
from .channel import STRATEGIES, CorruptionPlan, corrupt
from .errors import ContractViolation, DecodeFailure, InsdelError, InvalidInputError
from .experiment import REGIMES, Codec, ExperimentConfig, run_experiment, rows_to_csv, write_results
from .innersearch import dumps_table, loads_table
from .regimes import build_highnoise, build_kary, verify_code
from .seqkit import dumps_strings, loads_strings

EXIT_DECODE = 2
EXIT_ERROR = 1


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None


def _fracs(text: str) -> list[float]:
    return [float(_frac(t)) for t in text.split(",") if t.strip()]


def _strategies(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in STRATEGIES:
            raise argparse.ArgumentTypeError(f"unknown strategy {n!r}")
    return names


def _message(text: str) -> tuple[int, ...]:
    text = text.strip()
    return tuple(int(t) for t in text.split(",")) if text else ()


def _format_message(msg) -> str:
    return ",".join(str(x) for x in msg)


# ---------------------------------------------------------------------------
# construction from flags


def _add_params(p: argparse.ArgumentParser, regime_required: bool = True):
    p.add_argument("--regime", choices=REGIMES, required=regime_required)
    p.add_argument("--mode", choices=("paper", "explicit"), default="explicit")
    p.add_argument("--eps", type=_frac)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--d", type=int, help="outer degree bound (message length)")
    p.add_argument("--delta", type=_frac)
    p.add_argument("--gamma", type=_frac)
    p.add_argument("--margin", type=_frac, help="k-ary inner margin below 1 - 2/(k+1)")
    p.add_argument("--theta-buf", type=_frac, default=highrate.DEFAULT_THETA_BUF)
    p.add_argument("--spec", type=Path, help="spec file (custom regime or existing code)")
    p.add_argument("--table", type=Path, help="code table file")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError("missing flags: " + ", ".join("--" + n.replace("_", "-") for n in missing))


def build_from_args(args, seed: int = 0):
    if args.regime == "custom" or args.regime is None:
        _need(args, "spec", "table")
        return load_spec(args.spec, args.table)
    if args.regime == "highrate":
        _need(args, "q")
        if args.mode == "paper":
            return highrate.build_highrate(args.eps, args.q, "paper")
        _need(args, "delta", "h")
        return highrate.build_highrate(args.eps, args.q, "explicit", delta=args.delta, m=args.m, h=args.h,
                                       d=args.d, theta_buf=args.theta_buf, seed=seed)
    if args.regime == "highnoise":
        _need(args, "eps", "q")
        return build_highnoise(args.eps, args.q, args.mode, k=args.k, m=args.m, d=args.d,
                               gamma=args.gamma, seed=seed)
    _need(args, "k", "eps", "q")
    return build_kary(args.k, args.eps, args.q, args.mode, m=args.m, d=args.d, margin=args.margin,
                      gamma=args.gamma, seed=seed)


def dumps_spec(spec) -> str:
    if isinstance(spec, highrate.HighRateSpec):
        return highrate.dumps_spec(spec)
    return listconcat.dumps_spec(spec)


def load_spec(spec_path: Path, table_path: Path):
    table = loads_table(Path(table_path).read_text())
    text = Path(spec_path).read_text()
    kind = highrate.parse_kv(text).get("kind", "highrate")
    if kind == "highrate":
        return highrate.loads_spec(text, table)
    if kind == "concat":
        return listconcat.loads_spec(text, table)
    raise InvalidInputError(f"unknown spec kind {kind!r}")


def _read_one(path: Path | None):
    text = sys.stdin.read() if path is None or str(path) == "-" else Path(path).read_text()
    strings = loads_strings(text)
    if len(strings) != 1:
        raise InvalidInputError(f"expected one string, found {len(strings)}")
    return strings[0]


def _emit(text: str, out: Path | None):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args):
    spec = build_from_args(args, args.seed)
    prefix = Path(args.out)
    Path(f"{prefix}.table").write_text(dumps_table(spec.inner))
    Path(f"{prefix}.spec").write_text(dumps_spec(spec))
    print(f"wrote {prefix}.table {prefix}.spec length={spec.length} codewords={len(spec.inner)}")


def cmd_encode(args):
    codec = Codec(load_spec(args.spec, args.table), "custom")
    word = codec.encode(_message(args.message))
    _emit(dumps_strings([word], codec.k), args.out)


def cmd_decode(args):
    codec = Codec(load_spec(args.spec, args.table), "custom")
    s = _read_one(args.input)
    print(_format_message(codec.decode(s)))


def cmd_corrupt(args):
    c = _read_one(args.input)
    layout = load_spec(args.spec, args.table).layout() if args.spec else None
    s, plan = corrupt(c, args.budget, args.strategy, args.seed, layout=layout, k=c.k)
    _emit(dumps_strings([s], c.k), args.out)
    if args.plan:
        Path(args.plan).write_text(plan.dumps())


def cmd_verify(args):
    spec = load_spec(args.spec, args.table) if args.spec else build_from_args(args, args.seed)
    report = verify_code(spec, effort=args.effort, seed=args.seed)
    _emit(report.dumps(), args.out)
    if not report.passed:
        failed = ",".join(c.name for c in report.checks if not c.passed)
        raise InsdelError(f"verification failed: {failed}")


def cmd_experiment(args):
    spec = build_from_args(args, args.seed)
    config = ExperimentConfig(regime=args.regime, params={}, budget_fracs=args.budget_fracs,
                              trials=args.trials, strategies=args.strategies, seed=args.seed,
                              out=args.out, timing=args.timing)
    rows = run_experiment(config, Codec(spec, args.regime))
    if args.out is None or str(args.out) == "-":
        sys.stdout.write(rows_to_csv(rows))
    else:
        write_results(rows, args.out, plot=not args.no_plot)


def cmd_replay(args):
    codec = Codec(load_spec(args.spec, args.table), "custom")
    c = _read_one(args.input)
    plan = CorruptionPlan.loads(Path(args.plan).read_text())
    s = plan.apply(c)
    within = len(plan.edits) <= plan.budget
    try:
        msg = codec.decode(s)
    except (DecodeFailure, ContractViolation) as exc:
        print(f"outcome=failure edits={len(plan.edits)} within_budget={within} reason={type(exc).__name__}")
        raise
    print(f"outcome=success edits={len(plan.edits)} within_budget={within} message={_format_message(msg)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="insdel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="search an inner table and write table + spec files")
    _add_params(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("encode", help="encode a message (comma-separated coefficients)")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a received string")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--input", type=Path)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("corrupt", help="apply a budgeted corruption and save its edit script")
    p.add_argument("--input", type=Path)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="uniform")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--spec", type=Path)
    p.add_argument("--table", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--plan", type=Path)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("verify", help="re-verify a code and print its report")
    _add_params(p, regime_required=False)
    p.add_argument("--effort", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="sweep budgets x strategies x trials into a CSV")
    _add_params(p)
    p.add_argument("--budget-fracs", type=_fracs, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--strategies", type=_strategies, default=list(STRATEGIES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--timing", action="store_true", help="record mean decode time (breaks byte-identity)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("replay", help="re-apply a saved edit script and decode again")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--input", type=Path, required=True, help="the original codeword")
    p.add_argument("--plan", type=Path, required=True)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (DecodeFailure, ContractViolation) as exc:
        print(f"error: kind={type(exc).__name__} message={_one_line(exc)}", file=sys.stderr)
        return EXIT_DECODE
    except (InsdelError, OSError, ValueError) as exc:
        print(f"error: kind={type(exc).__name__} message={_one_line(exc)}", file=sys.stderr)
        return EXIT_ERROR
    return 0


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())
