"""Command-line front end.

Exit status: 0 = random, 1 = non-random, 2 = usage or I/O error.

    randzip analyze stream.bin --alpha 0.01
    randzip analyze bits.txt --format ascii01 --test kappa --m 3 --t 16384 --json
    randzip generate two-faced --k 3 --nu 0.85 --n 1048576 --seed 7 -o tf.bin
    randzip generate y --gamma 1 --n 131068 --seed 7 --format ascii01 -o y.txt
    randzip battery-info --n 1048576 --alpha 0.01
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .core import FORMATS, BitParseError, ContractError, format_bits, parse_bits
from .generators import (
    GenerationError,
    TwoFacedParams,
    YSequenceParams,
    build_y_sequence,
    generate_bernoulli,
    generate_markov,
    generate_two_faced,
)
from .testkit import (
    KINDS,
    BatteryConfig,
    BatteryReport,
    TestSpec,
    default_battery,
    run_battery,
)

EXIT_RANDOM = 0
EXIT_NON_RANDOM = 1
EXIT_ERROR = 2

REPORT_SCHEMA = "randzip.report"
REPORT_VERSION = 1


class UsageError(Exception):
    pass


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randzip", description="Compression-based randomness tests for bit streams."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="test a bit stream with one test or a battery")
    an.add_argument("input", nargs="?", default="-", help="input file, '-' for stdin")
    an.add_argument("--format", choices=FORMATS, default="raw-msb-first")
    an.add_argument("--alpha", type=_alpha, default=0.01)
    an.add_argument("--battery", choices=["default"], default="default")
    an.add_argument("--test", choices=KINDS, help="run a single test instead of the battery")
    an.add_argument("--m", type=int, help="memory of the kappa test")
    an.add_argument("--t", type=int, help="block length (default: whole input)")
    an.add_argument("--max-order", type=int, help="largest memory of the rho mixture")
    an.add_argument("--limit", type=int, help="use only the first LIMIT bits")
    an.add_argument("--json", action="store_true", help="emit a JSON report")

    gen = sub.add_parser("generate", help="write an adversarial or calibration stream")
    gen.add_argument("source", choices=["two-faced", "y", "bernoulli", "markov"])
    gen.add_argument("--n", type=int, required=True, help="number of bits")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--k", type=int, default=3, help="two-faced order")
    gen.add_argument("--nu", type=float, default=0.85, help="two-faced bias")
    gen.add_argument("--variant", choices=["T", "T_hat"], default="T")
    gen.add_argument("--gamma", type=float, default=1.0, help="y(x) copy fraction")
    gen.add_argument("--p", type=float, default=0.5, help="Bernoulli P(1)")
    gen.add_argument(
        "--p-zero",
        type=lambda s: [float(v) for v in s.split(",")],
        help="markov: comma-separated P(0|context) for the 2^k contexts",
    )
    gen.add_argument("--format", choices=FORMATS, default="raw-msb-first")
    gen.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")

    info = sub.add_parser("battery-info", help="show the default battery for a length")
    info.add_argument("--n", type=int, required=True)
    info.add_argument("--alpha", type=_alpha, default=0.01)
    info.add_argument("--json", action="store_true")
    return parser


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_output(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def report_to_json(report: BatteryReport, command: str = "analyze") -> str:
    doc = {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": command}
    doc.update(report.to_dict())
    return json.dumps(doc, sort_keys=True, indent=2)


def report_from_json(text: str) -> BatteryReport:
    doc = json.loads(text)
    if doc.get("schema") != REPORT_SCHEMA or doc.get("version") != REPORT_VERSION:
        raise ValueError("not a randzip report of a supported version")
    return BatteryReport.from_dict(doc)


def _fmt_params(params: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in params.items()) or "-"


def _fmt_p(log2_p: int, p: float) -> str:
    return f"{p:.3g}" if log2_p > -60 else f"2^{log2_p}"


def report_to_text(report: BatteryReport) -> str:
    lines = [
        f"n = {report.n}   alpha = {report.alpha:g}   sum of member levels = {report.alpha_budget:.6g}",
        f"{'test':<10} {'params':<22} {'codelength':>10} {'tau':>8} {'threshold':>9} "
        f"{'level':>10} {'p <=':>10}  verdict",
    ]
    for d in report.decisions:
        lines.append(
            f"{d.test_name:<10} {_fmt_params(d.params):<22} {d.codelength:>10} {d.tau:>8} "
            f"{d.threshold:>9.3f} {d.alpha:>10.4g} {_fmt_p(d.log2_p_bound, d.p_bound):>10}  {d.verdict}"
        )
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines)


def _single_spec(args) -> TestSpec:
    if args.test == "kappa" and args.m is None:
        raise UsageError("--test kappa requires --m")
    if args.test == "lz77":
        return TestSpec("lz77")
    if args.test == "kappa":
        return TestSpec("kappa", m=args.m, t=args.t)
    return TestSpec("rho", t=args.t, max_order=args.max_order)


def cmd_analyze(args) -> int:
    x = parse_bits(_read_input(args.input), args.format)
    if args.limit is not None:
        if args.limit < 1:
            raise UsageError("--limit must be positive")
        x = x[: args.limit]
    if x.n == 0:
        raise UsageError("input holds no bits")
    if args.test:
        config = BatteryConfig(args.alpha, (_single_spec(args),), (1.0,))
    else:
        config = default_battery(x.n, args.alpha)
    report = run_battery(x, config)
    print(report_to_json(report) if args.json else report_to_text(report))
    return EXIT_NON_RANDOM if report.rejects else EXIT_RANDOM


def cmd_generate(args) -> int:
    n = args.n
    if n < 0:
        raise UsageError("--n must be non-negative")
    if args.source == "two-faced":
        x = generate_two_faced(TwoFacedParams(args.k, args.nu, args.variant, args.seed), n)
    elif args.source == "y":
        x = build_y_sequence(YSequenceParams(args.seed, args.gamma, n))
    elif args.source == "bernoulli":
        x = generate_bernoulli(args.p, n, args.seed)
    else:
        if not args.p_zero:
            raise UsageError("markov source requires --p-zero")
        x = generate_markov(args.p_zero, n, args.seed)
    if args.format == "raw-msb-first" and x.n % 8:
        print(
            f"randzip: note: {x.n} bits padded with {8 - x.n % 8} zero bits; "
            f"analyze with --limit {x.n}",
            file=sys.stderr,
        )
    _write_output(args.output, format_bits(x, args.format))
    return EXIT_RANDOM


def cmd_battery_info(args) -> int:
    config = default_battery(args.n, args.alpha)
    if args.json:
        doc = {
            "schema": "randzip.battery",
            "version": REPORT_VERSION,
            "n": args.n,
            "alpha": config.alpha,
            "alpha_budget": config.alpha_budget,
            "members": [
                {"test": s.name, "kind": s.kind, "params": s.params(), "weight": w, "alpha": a}
                for s, w, a in zip(config.members, config.weights, config.member_alphas)
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
        return EXIT_RANDOM
    print(f"default battery for n = {args.n}, alpha = {config.alpha:g}")
    for s, w, a in zip(config.members, config.weights, config.member_alphas):
        print(f"  {s.name:<10} {_fmt_params(s.params()):<22} weight {w:<10.6g} alpha_i {a:.6g}")
    print(f"  sum of alpha_i = {config.alpha_budget:.6g} <= {config.alpha:g}")
    return EXIT_RANDOM


COMMANDS = {"analyze": cmd_analyze, "generate": cmd_generate, "battery-info": cmd_battery_info}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_RANDOM
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ContractError, BitParseError, GenerationError, OSError) as exc:
        print(f"randzip: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
