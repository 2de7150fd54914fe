"""Timing harness: the classic sandwich route vs the product-eigenvalue route.

Both routes cost O(n^3), so they differ by a constant factor that depends on
how the backend's Hermitian eigensolver compares with its general eigenvalue
iteration.  The harness times full fidelity evaluations on one fixed pair per
dimension, reports median/min/mean/stddev per (dimension, method), the
classic-over-eigenvalue speedup per dimension, and a fitted log-log scaling
exponent per method.

Timing runs single-threaded by default (BLAS pools pinned via threadpoolctl)
so the factor measures algorithmic work rather than parallelism; reports are
labeled with the thread count that produced them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import ClockError, DomainError, ValueDriftError
from .fidelity import FidelityMethod, fidelity
from .states import StateSeed, random_density

#: Methods timed when none are requested explicitly.
DEFAULT_BENCH_METHODS = (FidelityMethod.CLASSIC, FidelityMethod.PRODUCT_EIG)

#: Dimensions included in the scaling-exponent fit.
SCALING_MIN_DIM = 64

#: Maximum allowed drift of the fidelity value across timed repetitions.
VALUE_DRIFT_TOL = 1e-12

CSV_HEADER = "dim,method,median_s,min_s,mean_s,stddev_s,reps"


@dataclass
class BenchConfig:
    """Benchmark parameters; dims are normalized to sorted unique values."""

    dims: list[int]
    reps: int = 10
    warmup_reps: int = 1
    master_seed: int = 0
    methods: tuple[FidelityMethod, ...] = DEFAULT_BENCH_METHODS
    threads: int = 1

    def __post_init__(self) -> None:
        dims = sorted({int(n) for n in self.dims})
        if not dims or dims[0] < 2:
            raise DomainError(f"dims must be integers >= 2, got {self.dims!r}")
        self.dims = dims
        if self.reps < 3:
            raise DomainError(f"reps must be >= 3, got {self.reps!r}")
        if self.warmup_reps < 1:
            raise DomainError(f"warmup_reps must be >= 1, got {self.warmup_reps!r}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads!r}")
        methods = tuple(m.resolve() for m in self.methods)
        if not methods:
            raise DomainError("methods must not be empty")
        self.methods = methods


@dataclass(frozen=True)
class TimingStats:
    """Timing summary for one (dimension, method) cell."""

    method: FidelityMethod
    dim: int
    reps: int
    median_seconds: float
    min_seconds: float
    mean_seconds: float
    stddev_seconds: float
    value: float

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "method": self.method.value,
            "median_s": self.median_seconds,
            "min_s": self.min_seconds,
            "mean_s": self.mean_seconds,
            "stddev_s": self.stddev_seconds,
            "reps": self.reps,
            "value": self.value,
        }


def time_method(method: FidelityMethod, n: int, reps: int, warmup: int,
                seed: StateSeed) -> TimingStats:
    """Time one method on a fixed random full-rank pair derived from ``seed``.

    The pair is generated outside the timed region (streams ``seed`` and
    ``seed + 1``); ``warmup`` untimed evaluations precede ``reps`` timed ones
    on a monotonic clock.  Every repetition must reproduce the first value
    within 1e-12, which guards against state corruption inside the kernels.
    """
    if reps < 3:
        raise DomainError(f"reps must be >= 3, got {reps!r}")
    if warmup < 1:
        raise DomainError(f"warmup must be >= 1, got {warmup!r}")
    method = method.resolve()
    rho = random_density(n, n, seed)
    sigma = random_density(n, n, seed.substream(1))
    for _ in range(warmup):
        fidelity(rho, sigma, method)
    durations = np.empty(reps)
    reference = None
    for i in range(reps):
        start = time.perf_counter()
        result = fidelity(rho, sigma, method)
        durations[i] = time.perf_counter() - start
        if durations[i] <= 0.0:
            raise ClockError(f"non-positive duration {durations[i]!r} at rep {i}")
        if reference is None:
            reference = result.raw_value
        elif abs(result.raw_value - reference) > VALUE_DRIFT_TOL:
            raise ValueDriftError(
                f"value drifted by {abs(result.raw_value - reference):.3e} "
                f"at rep {i} (method={method.value}, n={n})"
            )
    return TimingStats(
        method=method,
        dim=n,
        reps=reps,
        median_seconds=float(np.median(durations)),
        min_seconds=float(np.min(durations)),
        mean_seconds=float(np.mean(durations)),
        stddev_seconds=float(np.std(durations, ddof=1)),
        value=float(reference),
    )


@dataclass
class BenchReport:
    """All timings of one benchmark run plus derived speedups and scaling fits."""

    dims: list[int]
    reps: int
    warmup_reps: int
    master_seed: int
    methods: list[str]
    threads: int
    rows: list[TimingStats] = field(default_factory=list)
    speedups: dict[int, float] = field(default_factory=dict)
    scaling_exponents: dict[str, float | None] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "reps": self.reps,
            "warmup_reps": self.warmup_reps,
            "master_seed": self.master_seed,
            "methods": list(self.methods),
            "threads": self.threads,
            "rows": [r.to_dict() for r in self.rows],
            "speedups": {str(dim): s for dim, s in sorted(self.speedups.items())},
            "scaling_exponents": dict(self.scaling_exponents),
        }

    def csv_lines(self) -> list[str]:
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.dim},{r.method.value},{r.median_seconds!r},{r.min_seconds!r},"
                f"{r.mean_seconds!r},{r.stddev_seconds!r},{r.reps}"
            )
        return lines


def _fit_scaling(points: list[tuple[int, float]]) -> float | None:
    if len(points) < 2:
        return None
    dims = np.log([float(d) for d, _ in points])
    times = np.log([t for _, t in points])
    return float(np.polyfit(dims, times, 1)[0])


def speedup_report(config: BenchConfig) -> BenchReport:
    """Run the full benchmark grid described by ``config``.

    Every method sees the same state pair per dimension.  The speedup row for
    a dimension is median(classic) / median(product-eig) and only appears
    when both methods were timed.
    """
    report = BenchReport(
        dims=list(config.dims),
        reps=config.reps,
        warmup_reps=config.warmup_reps,
        master_seed=config.master_seed,
        methods=[m.value for m in config.methods],
        threads=config.threads,
    )
    with threadpool_limits(limits=config.threads):
        for i, dim in enumerate(config.dims):
            seed = StateSeed(config.master_seed, 2 * i)
            for method in config.methods:
                report.rows.append(
                    time_method(method, dim, config.reps, config.warmup_reps, seed)
                )
    by_cell = {(r.dim, r.method): r for r in report.rows}
    for dim in config.dims:
        classic = by_cell.get((dim, FidelityMethod.CLASSIC))
        fast = by_cell.get((dim, FidelityMethod.PRODUCT_EIG))
        if classic and fast:
            report.speedups[dim] = classic.median_seconds / fast.median_seconds
    for method in config.methods:
        points = [
            (r.dim, r.median_seconds)
            for r in report.rows
            if r.method is method and r.dim >= SCALING_MIN_DIM
        ]
        report.scaling_exponents[method.value] = _fit_scaling(points)
    return report
