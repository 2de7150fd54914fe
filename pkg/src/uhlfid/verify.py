"""Executable verification: structural checks and the randomized property suite.

``check_block_structure`` turns the similarity argument behind the product
fidelity routes into residual checks: in the eigenbasis of a rank-deficient
rho, the Hermitian sandwich must be block diagonal, the plain product block
upper triangular, and their nonzero spectra must coincide.

``run_property_suite`` executes every documented invariant of the fidelity
and verification modules over seeded random states and reports worst-case
residuals.  Identical inputs always produce identical reports.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import DimensionError, DomainError, RankError
from .fidelity import (
    CONCRETE_METHODS,
    FidelityMethod,
    fidelity,
    miszczak_decomposition,
    sandwich_spectrum,
)
from .matcore import general_eigenvalues, herm_eig
from .states import (
    DensityMatrix,
    StateSeed,
    conjugate,
    pure_state,
    random_density,
    random_unitary,
    tensor,
    validate,
)

#: Spectrum entries below this are treated as the null block's zeros when
#: comparing nonzero spectra.
NULL_EIGENVALUE = 1e-10


@dataclass(frozen=True)
class BlockStructureReport:
    """Residuals of the block-structure checks in rho's eigenbasis.

    ``p`` and ``q`` are the dimensions of the positive-definite and null
    blocks (p + q = n); ``max_lower_left`` is the largest magnitude in the
    lower-left block of the product, ``m_offdiag`` the largest magnitude
    outside the leading p-by-p block of the Hermitian sandwich, and
    ``spec_distance`` the componentwise distance between the two sorted
    spectra with sub-threshold values zeroed.
    """

    p: int
    q: int
    max_lower_left: float
    m_offdiag: float
    spec_distance: float


def check_block_structure(rho: DensityMatrix, sigma: DensityMatrix) -> BlockStructureReport:
    """Verify the block structure of the sandwich and the product for singular rho.

    Raises RankError if rho is numerically full rank (there is no null block
    to check).
    """
    if rho.dim != sigma.dim:
        raise DimensionError(f"state dimensions differ: {rho.dim} vs {sigma.dim}")
    n = rho.dim
    w, v = herm_eig(rho.mat, rho.validation_tol)
    w = w[::-1]
    v = v[:, ::-1]
    null_tol = rho.validation_tol * n
    p = int(np.sum(w > null_tol))
    if p >= n:
        raise RankError(f"rho is numerically full rank (all {n} eigenvalues above {null_tol:.3e})")
    # Eigenvalues in the declared null block are exact zeros of the model;
    # square-rooting their rounding noise would pollute the cross blocks.
    sqrt_w = np.where(w > null_tol, np.sqrt(np.maximum(w, 0.0)), 0.0)
    s = (v * sqrt_w) @ v.conj().T
    sandwich = s @ sigma.mat @ s
    product = rho.mat @ sigma.mat
    m_basis = v.conj().T @ sandwich @ v
    n_basis = v.conj().T @ product @ v
    m_offdiag = max(
        float(np.max(np.abs(m_basis[p:, :]))),
        float(np.max(np.abs(m_basis[:, p:]))),
    )
    max_lower_left = float(np.max(np.abs(n_basis[p:, :p])))
    w_m = herm_eig(sandwich, rho.validation_tol).eigenvalues
    lam_n = general_eigenvalues(product).real
    spec_m = np.sort(np.where(w_m < NULL_EIGENVALUE, 0.0, w_m))[::-1]
    spec_n = np.sort(np.where(lam_n < NULL_EIGENVALUE, 0.0, lam_n))[::-1]
    spec_distance = float(np.max(np.abs(spec_m - spec_n)))
    return BlockStructureReport(
        p=p,
        q=n - p,
        max_lower_left=max_lower_left,
        m_offdiag=m_offdiag,
        spec_distance=spec_distance,
    )


def commuting_oracle(p, q) -> float:
    """Fidelity of two commuting (diagonal) states from their spectra.

    For probability vectors this is the squared Bhattacharyya coefficient
    (sum_i sqrt(p_i q_i))^2, evaluated directly in binary64.  It is
    independent of every matrix kernel and serves as the ground truth for
    diagonal test states.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if p.shape != q.shape:
        raise DomainError(f"probability vectors differ in length: {p.size} vs {q.size}")
    for name, vec in (("p", p), ("q", q)):
        if vec.size == 0 or not np.all(np.isfinite(vec)):
            raise DomainError(f"{name} must be a nonempty finite vector")
        if np.min(vec) < 0.0:
            raise DomainError(f"{name} has a negative entry {np.min(vec):.6e}")
        total = float(np.sum(vec))
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"{name} sums to {total!r}, not 1 within 1e-12")
    return float(np.sum(np.sqrt(p * q))) ** 2


@dataclass(frozen=True)
class TolProfile:
    """Per-property residual thresholds for the suite."""

    name: str
    cross_method_full_rank: float = 1e-8
    cross_method_rank_deficient: float = 1e-7
    self_fidelity: float = 1e-10
    value_range: float = 1e-9
    symmetry: float = 1e-9
    unitary_invariance: float = 1e-9
    multiplicativity: float = 1e-8
    pure_state_reduction: float = 1e-10
    pure_state_reduction_generic: float = 1e-7
    miszczak_identity: float = 1e-9
    correction_nonnegative: float = 1e-10
    overlap_bound: float = 1e-10
    sandwich_invariance: float = 1e-8
    block_m_offdiag: float = 1e-9
    block_lower_left: float = 1e-9
    block_spectrum: float = 1e-8
    commuting_oracle: float = 1e-12

    def scaled(self, factor: float, name: str) -> "TolProfile":
        values = {
            f.name: getattr(self, f.name) * factor
            for f in fields(self)
            if f.name != "name"
        }
        return TolProfile(name=name, **values)


DEFAULT_PROFILE = TolProfile(name="default")
STRICT_PROFILE = DEFAULT_PROFILE.scaled(0.1, "strict")

PROFILES = {"default": DEFAULT_PROFILE, "strict": STRICT_PROFILE}


@dataclass
class PropertyOutcome:
    """Worst-case residual of one property over all trials."""

    name: str
    passed: bool
    worst_residual: float
    threshold: float
    evaluations: int
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "threshold": self.threshold,
            "evaluations": self.evaluations,
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    """Aggregate result of one property-suite run; reproducible from the seeds."""

    master_seed: int
    trials: int
    dims: list[int]
    profile: str
    properties: list[PropertyOutcome] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_dict(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "profile": self.profile,
            "all_passed": self.all_passed,
            "properties": [p.to_dict() for p in self.properties],
        }


class _Worst:
    """Track the worst residual seen and where it occurred."""

    def __init__(self) -> None:
        self.residual = 0.0
        self.detail = ""
        self.count = 0

    def update(self, residual: float, detail: str) -> None:
        self.count += 1
        if self.count == 1 or residual > self.residual:
            self.residual = residual
            self.detail = detail

    def outcome(self, name: str, threshold: float) -> PropertyOutcome:
        return PropertyOutcome(
            name=name,
            passed=self.residual <= threshold,
            worst_residual=self.residual,
            threshold=threshold,
            evaluations=self.count,
            detail=self.detail,
        )


def _seed(master: int, trial: int, slot: int) -> StateSeed:
    # 16 slots per trial keep per-object streams disjoint across trials.
    return StateSeed(master, trial * 16 + slot)


def _pair(n: int, master: int, trial: int, rank_rho: int | None = None,
          rank_sigma: int | None = None) -> tuple[DensityMatrix, DensityMatrix]:
    rho = random_density(n, rank_rho or n, _seed(master, trial, 0))
    sigma = random_density(n, rank_sigma or n, _seed(master, trial, 1))
    return rho, sigma


def _raw_values(rho: DensityMatrix, sigma: DensityMatrix) -> list[float]:
    return [fidelity(rho, sigma, m).raw_value for m in CONCRETE_METHODS]


def _prop_cross_method_full_rank(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            vals = _raw_values(rho, sigma)
            w.update(max(vals) - min(vals), f"n={n} trial={t}")


def _prop_cross_method_rank_deficient(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        rank = (n + 1) // 2
        for t in range(trials):
            rho, sigma = _pair(n, master, t, rank_rho=rank)
            vals = _raw_values(rho, sigma)
            w.update(max(vals) - min(vals), f"n={n} trial={t} rho-deficient")
            rho2, sigma2 = _pair(n, master, t, rank_rho=rank, rank_sigma=rank)
            vals = _raw_values(rho2, sigma2)
            w.update(max(vals) - min(vals), f"n={n} trial={t} both-deficient")


def _prop_self_fidelity(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho = random_density(n, n, _seed(master, t, 0))
            for m in CONCRETE_METHODS:
                w.update(abs(fidelity(rho, rho, m).raw_value - 1.0),
                         f"n={n} trial={t} method={m.value}")


def _prop_value_range(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            for m in CONCRETE_METHODS:
                res = fidelity(rho, sigma, m)
                band = max(res.raw_value - 1.0, -res.raw_value, 0.0)
                if not 0.0 <= res.value <= 1.0:
                    band = float("inf")
                w.update(band, f"n={n} trial={t} method={m.value}")


def _prop_symmetry(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            for m in CONCRETE_METHODS:
                diff = abs(fidelity(rho, sigma, m).raw_value
                           - fidelity(sigma, rho, m).raw_value)
                w.update(diff, f"n={n} trial={t} method={m.value}")


def _prop_unitary_invariance(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            u = random_unitary(n, _seed(master, t, 2))
            rho_u = conjugate(u, rho)
            sigma_u = conjugate(u, sigma)
            for m in CONCRETE_METHODS:
                diff = abs(fidelity(rho_u, sigma_u, m).raw_value
                           - fidelity(rho, sigma, m).raw_value)
                w.update(diff, f"n={n} trial={t} method={m.value}")


def _prop_multiplicativity(dims, trials, master, w: _Worst) -> None:
    # Fixed 2x2 (x) 3x3 instances regardless of the requested dims.
    for t in range(trials):
        rho1 = random_density(2, 2, _seed(master, t, 0))
        sigma1 = random_density(2, 2, _seed(master, t, 1))
        rho2 = random_density(3, 3, _seed(master, t, 2))
        sigma2 = random_density(3, 3, _seed(master, t, 3))
        rho_t = tensor(rho1, rho2)
        sigma_t = tensor(sigma1, sigma2)
        for m in CONCRETE_METHODS:
            product = fidelity(rho1, sigma1, m).raw_value * fidelity(rho2, sigma2, m).raw_value
            diff = abs(fidelity(rho_t, sigma_t, m).raw_value - product)
            w.update(diff, f"trial={t} method={m.value}")


def _prop_pure_state_reduction(dims, trials, master, w: _Worst) -> None:
    # Basis-aligned projectors keep the product's null spectrum exact, so the
    # rank-1 reduction holds at full precision through every route.
    for n in dims:
        for t in range(trials):
            basis = np.zeros(n, dtype=np.complex128)
            basis[t % n] = 1.0
            rho = pure_state(basis)
            sigma = random_density(n, n, _seed(master, t, 1))
            overlap = float(np.trace(rho.mat @ sigma.mat).real)
            for m in CONCRETE_METHODS:
                w.update(abs(fidelity(rho, sigma, m).raw_value - overlap),
                         f"n={n} trial={t} method={m.value}")


def _prop_pure_state_reduction_generic(dims, trials, master, w: _Worst) -> None:
    # Haar-random pure states: the computed null spectrum of the product
    # carries ~eps noise whose square roots floor the deviation near
    # n * sqrt(eps), so the threshold is wider than the basis-aligned one.
    for n in dims:
        for t in range(trials):
            gen = _seed(master, t, 4).generator()
            vec = gen.standard_normal(n) + 1j * gen.standard_normal(n)
            rho = pure_state(vec)
            sigma = random_density(n, n, _seed(master, t, 1))
            overlap = float(np.trace(rho.mat @ sigma.mat).real)
            for m in CONCRETE_METHODS:
                w.update(abs(fidelity(rho, sigma, m).raw_value - overlap),
                         f"n={n} trial={t} method={m.value}")


def _prop_miszczak_identity(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            overlap, correction = miszczak_decomposition(rho, sigma)
            value = fidelity(rho, sigma, FidelityMethod.PRODUCT_EIG).raw_value
            w.update(abs(overlap + correction - value), f"n={n} trial={t}")


def _prop_correction_nonnegative(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            _, correction = miszczak_decomposition(rho, sigma)
            w.update(max(-correction, 0.0), f"n={n} trial={t}")


def _prop_overlap_bound(dims, trials, master, w: _Worst) -> None:
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            overlap, _ = miszczak_decomposition(rho, sigma)
            value = fidelity(rho, sigma, FidelityMethod.PRODUCT_EIG).raw_value
            w.update(max(overlap - value, 0.0), f"n={n} trial={t}")


def _prop_sandwich_invariance(dims, trials, master, w: _Worst) -> None:
    exponents = (0.0, 0.3, 1.0)
    for n in dims:
        for t in range(trials):
            rho, sigma = _pair(n, master, t)
            base = np.sort(sandwich_spectrum(rho, sigma, 0.5).eigenvalues.real)[::-1]
            for x in exponents:
                spec = np.sort(sandwich_spectrum(rho, sigma, x).eigenvalues.real)[::-1]
                w.update(float(np.max(np.abs(spec - base))), f"n={n} trial={t} x={x}")


def _block_reports(dims, trials, master):
    for n in dims:
        if n < 2:
            continue
        for t in range(trials):
            rank = 1 + t % (n - 1)
            rho = random_density(n, rank, _seed(master, t, 0))
            sigma = random_density(n, n, _seed(master, t, 1))
            yield n, t, rank, check_block_structure(rho, sigma)


def _prop_block_m_offdiag(dims, trials, master, w: _Worst) -> None:
    for n, t, rank, report in _block_reports(dims, trials, master):
        w.update(report.m_offdiag, f"n={n} trial={t} rank={rank}")


def _prop_block_lower_left(dims, trials, master, w: _Worst) -> None:
    for n, t, rank, report in _block_reports(dims, trials, master):
        w.update(report.max_lower_left, f"n={n} trial={t} rank={rank}")


def _prop_block_spectrum(dims, trials, master, w: _Worst) -> None:
    for n, t, rank, report in _block_reports(dims, trials, master):
        w.update(report.spec_distance, f"n={n} trial={t} rank={rank}")


def _prop_commuting_oracle(dims, trials, master, w: _Worst) -> None:
    eligible = [n for n in dims if n <= 16] or [2, 4]
    for n in eligible:
        for t in range(trials):
            gen = _seed(master, t, 5).generator()
            p = gen.dirichlet(np.ones(n))
            q = gen.dirichlet(np.ones(n))
            rho = validate(np.diag(p).astype(np.complex128))
            sigma = validate(np.diag(q).astype(np.complex128))
            oracle = commuting_oracle(p, q)
            for m in CONCRETE_METHODS:
                w.update(abs(fidelity(rho, sigma, m).raw_value - oracle),
                         f"n={n} trial={t} method={m.value}")


_PROPERTIES = (
    ("cross_method_full_rank", _prop_cross_method_full_rank),
    ("cross_method_rank_deficient", _prop_cross_method_rank_deficient),
    ("self_fidelity", _prop_self_fidelity),
    ("value_range", _prop_value_range),
    ("symmetry", _prop_symmetry),
    ("unitary_invariance", _prop_unitary_invariance),
    ("multiplicativity", _prop_multiplicativity),
    ("pure_state_reduction", _prop_pure_state_reduction),
    ("pure_state_reduction_generic", _prop_pure_state_reduction_generic),
    ("miszczak_identity", _prop_miszczak_identity),
    ("correction_nonnegative", _prop_correction_nonnegative),
    ("overlap_bound", _prop_overlap_bound),
    ("sandwich_invariance", _prop_sandwich_invariance),
    ("block_m_offdiag", _prop_block_m_offdiag),
    ("block_lower_left", _prop_block_lower_left),
    ("block_spectrum", _prop_block_spectrum),
    ("commuting_oracle", _prop_commuting_oracle),
)

PROPERTY_NAMES = tuple(name for name, _ in _PROPERTIES)


def run_property_suite(trials: int, dims, master_seed: int,
                       tol_profile: TolProfile | None = None,
                       fault_property: str | None = None) -> SuiteReport:
    """Run every documented property over seeded random states.

    Failures are recorded in the report, never raised.  ``fault_property`` is
    a test hook that forces the named property to fail so the failure path of
    callers can be exercised.
    """
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    dims = [int(n) for n in dims]
    if not dims or any(n < 2 for n in dims):
        raise DomainError(f"dims must be a nonempty list of integers >= 2, got {dims!r}")
    profile = tol_profile or DEFAULT_PROFILE
    if fault_property is not None and fault_property not in PROPERTY_NAMES:
        raise DomainError(f"unknown property {fault_property!r} for fault injection")

    report = SuiteReport(master_seed=master_seed, trials=trials, dims=dims,
                         profile=profile.name)
    for name, func in _PROPERTIES:
        worst = _Worst()
        func(dims, trials, master_seed, worst)
        outcome = worst.outcome(name, getattr(profile, name))
        if fault_property == name:
            outcome = dataclasses.replace(
                outcome, passed=False, worst_residual=float("inf"),
                detail="injected fault (test hook)")
        report.properties.append(outcome)
    return report
