"""Command-line front end.

Subcommands::

    uhlfid compute --rho RHO.json --sigma SIGMA.json [--method NAME]
                   [--all-methods] [--tol REAL] [--report PATH]
    uhlfid verify  [--dims LIST] [--trials N] [--seed N]
                   [--tol-profile default|strict] [--report PATH]
    uhlfid bench   [--dims LIST] [--reps N] [--warmup N] [--seed N]
                   [--methods LIST] [--csv PATH] [--report PATH] [--threads N]

Exit codes: 0 success, 1 property-suite failure, 2 input validation failure,
3 numerical failure, 64 usage error.  Value outputs are bit-reproducible for
fixed seeds; only timings vary between runs.  ``UHLFID_THREADS`` mirrors
``--threads`` (the flag wins).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .bench import DEFAULT_BENCH_METHODS, BenchConfig, speedup_report
from .errors import NUMERICAL_ERRORS, VALIDATION_ERRORS, DomainError
from .fidelity import CONCRETE_METHODS, FidelityMethod, fidelity
from .matrixio import parse_matrix, sha256_hex, write_report
from .states import validate
from .verify import PROFILES, run_property_suite

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

_METHOD_NAMES = [m.value for m in FidelityMethod]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dims_arg(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension list {text!r}")
    if not dims:
        raise argparse.ArgumentTypeError("dimension list is empty")
    return dims


def _method_arg(text: str) -> FidelityMethod:
    try:
        return FidelityMethod(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown method {text!r} (choose from {', '.join(_METHOD_NAMES)})"
        )


def _methods_arg(text: str) -> tuple[FidelityMethod, ...]:
    methods = []
    for part in text.split(","):
        part = part.strip()
        try:
            methods.append(FidelityMethod(part))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown method {part!r} (choose from {', '.join(_METHOD_NAMES)})"
            )
    if not methods:
        raise argparse.ArgumentTypeError("method list is empty")
    return tuple(methods)


def _seed_arg(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not value > 0.0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> _Parser:
    parser = _Parser(prog="uhlfid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"uhlfid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    compute = sub.add_parser("compute", help="fidelity of two stored density matrices")
    compute.add_argument("--rho", required=True, help="matrix file for the first state")
    compute.add_argument("--sigma", required=True, help="matrix file for the second state")
    compute.add_argument("--method", type=_method_arg, default=FidelityMethod.AUTO,
                         metavar="NAME",
                         help=f"one of {', '.join(_METHOD_NAMES)} (default auto)")
    compute.add_argument("--tol", type=_positive_float, default=1e-10,
                         help="validation and kernel tolerance (default 1e-10)")
    compute.add_argument("--all-methods", action="store_true",
                         help="evaluate every concrete method and their max disagreement")
    compute.add_argument("--report", help="write a JSON run report to this path")
    compute.set_defaults(func=cmd_compute)

    verify = sub.add_parser("verify", help="run the randomized property suite")
    verify.add_argument("--dims", type=_dims_arg, default=[2, 4, 8, 16],
                        help="comma-separated dimensions (default 2,4,8,16)")
    verify.add_argument("--trials", type=int, default=50,
                        help="trials per property and dimension (default 50)")
    verify.add_argument("--seed", type=_seed_arg, default=0,
                        help="master seed (default 0)")
    verify.add_argument("--tol-profile", choices=sorted(PROFILES), default="default",
                        help="threshold profile (default 'default')")
    verify.add_argument("--report", help="write a JSON suite report to this path")
    verify.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)

    bench = sub.add_parser("bench", help="time the classic route against the eigenvalue route")
    bench.add_argument("--dims", type=_dims_arg, default=[64, 128, 256, 512],
                       help="comma-separated dimensions (default 64,128,256,512)")
    bench.add_argument("--reps", type=int, default=10, help="timed repetitions (default 10)")
    bench.add_argument("--warmup", type=int, default=1,
                       help="untimed warmup repetitions (default 1)")
    bench.add_argument("--seed", type=_seed_arg, default=0, help="master seed (default 0)")
    bench.add_argument("--methods", type=_methods_arg,
                       default=None, metavar="LIST",
                       help="comma-separated methods (default classic,product-eig)")
    bench.add_argument("--csv", help="write the timing table as CSV to this path")
    bench.add_argument("--report", help="write a JSON run report to this path")
    bench.add_argument("--threads", type=int, default=None,
                       help="BLAS threads (default: UHLFID_THREADS or 1)")
    bench.set_defaults(func=cmd_bench)
    return parser


def _print_result(result) -> None:
    print(
        f"method={result.method.value} value={result.value!r} "
        f"raw={result.raw_value!r} max_imag_residual={result.max_imag_residual!r} "
        f"clamped_mass={result.clamped_mass!r}"
    )


def _load_state(path: str, tol: float):
    with open(path, "rb") as handle:
        data = handle.read()
    return validate(parse_matrix(data), tol), data


def cmd_compute(args) -> int:
    rho, rho_bytes = _load_state(args.rho, args.tol)
    sigma, sigma_bytes = _load_state(args.sigma, args.tol)
    methods = list(CONCRETE_METHODS) if args.all_methods else [args.method]
    results = [fidelity(rho, sigma, m, args.tol) for m in methods]
    for result in results:
        _print_result(result)
    disagreement = None
    if args.all_methods:
        raws = [r.raw_value for r in results]
        disagreement = max(raws) - min(raws)
        print(f"max_disagreement={disagreement!r}")
    if args.report:
        report = {
            "tool": "uhlfid",
            "version": __version__,
            "command": "compute",
            "args": {
                "rho": args.rho,
                "sigma": args.sigma,
                "method": args.method.value,
                "all_methods": args.all_methods,
                "tol": args.tol,
            },
            "seeds": None,
            "inputs": {
                "rho": {"path": args.rho, "dim": rho.dim, "sha256": sha256_hex(rho_bytes)},
                "sigma": {"path": args.sigma, "dim": sigma.dim,
                          "sha256": sha256_hex(sigma_bytes)},
            },
            "results": [
                {
                    "method": r.method.value,
                    "value": r.value,
                    "raw_value": r.raw_value,
                    "max_imag_residual": r.max_imag_residual,
                    "clamped_mass": r.clamped_mass,
                    "elapsed_seconds": r.elapsed_seconds,
                }
                for r in results
            ],
            "max_disagreement": disagreement,
        }
        write_report(args.report, report)
    return EXIT_OK


def cmd_verify(args) -> int:
    profile = PROFILES[args.tol_profile]
    suite = run_property_suite(args.trials, args.dims, args.seed,
                               tol_profile=profile, fault_property=args.inject_fault)
    for prop in suite.properties:
        print(
            f"property={prop.name} passed={str(prop.passed).lower()} "
            f"worst={prop.worst_residual!r} threshold={prop.threshold!r} "
            f"evaluations={prop.evaluations}"
        )
    print(f"suite_passed={str(suite.all_passed).lower()}")
    if args.report:
        report = {
            "tool": "uhlfid",
            "version": __version__,
            "command": "verify",
            "args": {
                "dims": args.dims,
                "trials": args.trials,
                "seed": args.seed,
                "tol_profile": args.tol_profile,
            },
            "seeds": {"master_seed": args.seed},
            **suite.to_dict(),
        }
        write_report(args.report, report)
    return EXIT_OK if suite.all_passed else EXIT_SUITE_FAILURE


def _resolve_threads(flag_value) -> int:
    if flag_value is not None:
        if flag_value < 1:
            raise DomainError(f"--threads must be >= 1, got {flag_value}")
        return flag_value
    env = os.environ.get("UHLFID_THREADS")
    if env is None:
        return 1
    try:
        threads = int(env)
    except ValueError:
        raise DomainError(f"UHLFID_THREADS must be an integer, got {env!r}")
    if threads < 1:
        raise DomainError(f"UHLFID_THREADS must be >= 1, got {threads}")
    return threads


def cmd_bench(args) -> int:
    config = BenchConfig(
        dims=args.dims,
        reps=args.reps,
        warmup_reps=args.warmup,
        master_seed=args.seed,
        methods=args.methods or DEFAULT_BENCH_METHODS,
        threads=_resolve_threads(args.threads),
    )
    report = speedup_report(config)
    print(f"threads={report.threads}")
    print(f"{'dim':>6} {'method':<14} {'median_s':>12} {'min_s':>12} "
          f"{'mean_s':>12} {'stddev_s':>12} {'reps':>5}")
    for row in report.rows:
        print(f"{row.dim:>6} {row.method.value:<14} {row.median_seconds:>12.6f} "
              f"{row.min_seconds:>12.6f} {row.mean_seconds:>12.6f} "
              f"{row.stddev_seconds:>12.6f} {row.reps:>5}")
    for dim, factor in sorted(report.speedups.items()):
        print(f"speedup dim={dim} classic/product-eig={factor:.3f}")
    for method, exponent in report.scaling_exponents.items():
        shown = "none" if exponent is None else f"{exponent:.3f}"
        print(f"scaling method={method} exponent={shown}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("\n".join(report.csv_lines()) + "\n")
    if args.report:
        write_report(args.report, {
            "tool": "uhlfid",
            "version": __version__,
            "command": "bench",
            "seeds": {"master_seed": args.seed},
            **report.to_dict(),
        })
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
