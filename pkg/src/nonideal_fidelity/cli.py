"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

from . import analysis
from .errors import MacroscopicityWarning
from .sweep import MODES, QUADRANTS, SweepConfig, run_sweep
from .verify import DEFAULT_CASES, DEFAULT_SEED, FAULTS, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _g(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.6g}"


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _unit_interval(text: str) -> float:
    value = _finite(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return value


def _angle(text: str) -> float:
    value = _finite(text)
    if not 0.0 <= value <= math.pi:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, pi]")
    return value


def _eps(text: str) -> float:
    value = _finite(text)
    if not 0.0 <= value < 1.0:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1)")
    return value


def _positive(text: str) -> float:
    value = _finite(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"{text} must be > 0")
    return value


def _int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if value < lo:
            raise argparse.ArgumentTypeError(f"{text} must be >= {lo}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonideal-fidelity",
        description="Fidelity of ideal vs nonideal first-kind S_z measurements on a qubit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", help="ideal vs nonideal fidelity for one input state")
    p.add_argument("--alpha-sq", type=_unit_interval, help="|alpha|^2 of a pure input")
    p.add_argument("--theta", type=_angle, default=0.0, help="planar angle between alpha and beta")
    p.add_argument("--eps", type=_eps, required=True, help="aggregate measurement error")
    p.add_argument("--mixed", action="store_true", help="use the incoherent input diag(w1, 1-w1)")
    p.add_argument("--w1", type=_unit_interval, help="weight on |up> for --mixed")

    p = sub.add_parser("sweep", help="tabulate F_id^2 - F_nonid^2 over (|alpha|^2, theta)")
    p.add_argument("--eps", type=_eps, required=True)
    p.add_argument("--grid", type=_int_at_least(2), help="points per axis (sets both)")
    p.add_argument("--n-alpha", type=_int_at_least(2), default=101)
    p.add_argument("--n-theta", type=_int_at_least(2), default=101)
    p.add_argument("--mode", choices=MODES, default="analytic")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    p.add_argument("--jobs", type=_int_at_least(1), default=1, help="worker processes for simulation")

    p = sub.add_parser("bound", help="smallest attainable measurement error")
    p.add_argument("--m-norm", type=_positive, required=True, help="norm of the apparatus conserved quantity")

    p = sub.add_parser("verify", help="run the analytic-vs-simulation and invariant suites")
    p.add_argument("--cases", type=_int_at_least(1), default=DEFAULT_CASES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return parser


def cmd_fidelity(args, parser) -> int:
    if args.mixed:
        if args.w1 is None:
            parser.error("--mixed requires --w1")
        if args.alpha_sq is not None:
            parser.error("--alpha-sq applies to pure inputs only")
        report = analysis.mixed_report(args.w1, args.eps)
        print(f"input: mixed w1={_g(args.w1)} eps={_g(args.eps)}")
    else:
        if args.alpha_sq is None:
            parser.error("--alpha-sq is required for pure inputs")
        if args.w1 is not None:
            parser.error("--w1 requires --mixed")
        report = analysis.pure_report(args.alpha_sq, args.theta, args.eps)
        print(f"input: pure alpha_sq={_g(args.alpha_sq)} theta={_g(args.theta)} eps={_g(args.eps)}")
    print(f"f_id       {_g(report.f_id)}")
    print(f"f_nonid    {_g(report.f_nonid)}")
    print(f"delta_f    {_g(report.delta_f)}")
    print(f"delta_f_sq {_g(report.delta_f_sq)}")
    print("INCREASE: nonideal fidelity exceeds ideal" if report.increase else "no increase")
    return EXIT_OK


def cmd_sweep(args, parser) -> int:
    n_alpha = args.grid if args.grid is not None else args.n_alpha
    n_theta = args.grid if args.grid is not None else args.n_theta
    cfg = SweepConfig(args.eps, n_alpha, n_theta, args.mode)
    result = run_sweep(cfg, workers=args.jobs)
    text = result.to_csv() if args.format == "csv" else result.to_json()
    if args.out == "-":
        sys.stdout.write(text)
        summary = sys.stderr
    else:
        try:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        summary = sys.stdout
    fractions = " ".join(f"{q}={_g(result.regions[q])}" for q in QUADRANTS)
    hi, lo = result.extremum_max, result.extremum_min
    print(f"rows={n_alpha * n_theta} negative_cells={result.negative_cells['count']}", file=summary)
    print(f"increase fractions (interior): {fractions}", file=summary)
    print(
        f"max delta_f_sq={_g(hi.value)} at (alpha_sq={_g(hi.alpha_sq)}, theta={_g(hi.theta)}); "
        f"min delta_f_sq={_g(lo.value)} at (alpha_sq={_g(lo.alpha_sq)}, theta={_g(lo.theta)})",
        file=summary,
    )
    if result.max_divergence is not None:
        print(f"max |analytic - simulated| = {result.max_divergence:.3e}", file=summary)
    return EXIT_OK


def cmd_bound(args, parser) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", MacroscopicityWarning)
        bound = analysis.yanase_min_eps(args.m_norm)
    print(f"min eps {_g(bound)}")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    report = run_verification(args.cases, args.seed, fault=args.inject_fault)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {"fidelity": cmd_fidelity, "sweep": cmd_sweep, "bound": cmd_bound, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
