"""Validated density matrices, random-state generation, and state algebra.

A :class:`DensityMatrix` is Hermitian, positive semi-definite, and has unit
trace, all within its ``validation_tol``.  Random states and unitaries are
drawn from a counter-based Philox generator keyed by
:class:`StateSeed` ``(master_seed, stream_id)``, so identical seeds always
reproduce identical objects and parallel trials can use disjoint streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    HermiticityError,
    NegativityError,
    TraceError,
    UnitarityError,
    ZeroVectorError,
)
from .matcore import as_complex_matrix, hermiticity_defect, max_abs

_UINT64_MOD = 2**64


@dataclass(frozen=True)
class StateSeed:
    """Deterministic seed for state generation: a Philox key (master, stream)."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, int) or not 0 <= value < _UINT64_MOD:
                raise DomainError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    def generator(self) -> np.random.Generator:
        """Fresh Philox4x64-10 generator keyed by (master_seed, stream_id)."""
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, offset: int) -> "StateSeed":
        """Seed for a related stream, offset from this one (mod 2^64)."""
        return StateSeed(self.master_seed, (self.stream_id + offset) % _UINT64_MOD)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state.

    ``rank_estimate`` counts eigenvalues above ``validation_tol * dim``;
    the wrapped array is read-only.
    """

    mat: np.ndarray
    dim: int
    rank_estimate: int
    validation_tol: float


def validate(a, tol: float = 1e-10) -> DensityMatrix:
    """Check the three density-matrix invariants and wrap the matrix.

    Raises HermiticityError, TraceError, or NegativityError naming the
    violated invariant and its magnitude.
    """
    arr = as_complex_matrix(a, "density matrix")
    n = arr.shape[0]
    defect = hermiticity_defect(arr)
    if defect > tol:
        raise HermiticityError(
            f"density matrix is not Hermitian: defect {defect:.6e} exceeds {tol:.3e}"
        )
    tr = complex(np.trace(arr))
    if abs(tr - 1.0) > tol * n:
        raise TraceError(
            f"density matrix trace is {tr.real:.12g}{tr.imag:+.3e}j, "
            f"off unity by {abs(tr - 1.0):.6e} (allowed {tol * n:.3e})"
        )
    try:
        w = np.linalg.eigvalsh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue check failed: {exc}") from exc
    wmin = float(w[0])
    if wmin < -tol:
        raise NegativityError(
            f"density matrix is not PSD: eigenvalue {wmin:.6e} is below -{tol:.3e}"
        )
    rank = int(np.sum(w > tol * n))
    mat = arr.copy()
    mat.setflags(write=False)
    return DensityMatrix(mat=mat, dim=n, rank_estimate=rank, validation_tol=tol)


def pure_state(v, tol: float = 1e-10) -> DensityMatrix:
    """Rank-1 state |v><v| / <v|v> from a nonzero complex vector."""
    vec = np.asarray(v, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ZeroVectorError("cannot build a pure state from the zero vector")
    unit = vec / norm
    return validate(np.outer(unit, unit.conj()), tol)


def maximally_mixed(n: int, tol: float = 1e-10) -> DensityMatrix:
    """The state I_n / n."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    return validate(np.eye(n, dtype=np.complex128) / n, tol)


def random_density(n: int, rank: int, seed: StateSeed, tol: float = 1e-10) -> DensityMatrix:
    """Random density matrix of the given rank.

    Draws an n-by-rank matrix G of independent standard complex Gaussians
    and returns G G^dagger normalized to unit trace.  The rectangular G makes
    the null space structurally exact (up to rounding), so ``rank_estimate``
    equals ``rank`` with probability 1.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    if not isinstance(rank, int) or not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}], got {rank!r}")
    gen = seed.generator()
    g = (gen.standard_normal((n, rank)) + 1j * gen.standard_normal((n, rank))) / np.sqrt(2.0)
    mat = g @ g.conj().T
    mat /= np.trace(mat).real
    return validate(mat, tol)


def random_unitary(n: int, seed: StateSeed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The R diagonal's phases are absorbed into Q's columns, which makes the
    distribution exactly Haar rather than merely unitary.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    gen = seed.generator()
    z = (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    mod = np.abs(d)
    phases = np.where(mod > 0.0, d / np.where(mod > 0.0, mod, 1.0), 1.0)
    return q * phases


def conjugate(u, rho: DensityMatrix) -> DensityMatrix:
    """The state U rho U^dagger, revalidated."""
    u = as_complex_matrix(u, "unitary")
    if u.shape[0] != rho.dim:
        raise DimensionError(f"unitary dimension {u.shape[0]} != state dimension {rho.dim}")
    defect = max_abs(u.conj().T @ u - np.eye(rho.dim))
    if defect > 1e-8:
        raise UnitarityError(f"matrix is not unitary: defect {defect:.6e} exceeds 1e-08")
    return validate(u @ rho.mat @ u.conj().T, rho.validation_tol)


def tensor(rho1: DensityMatrix, rho2: DensityMatrix) -> DensityMatrix:
    """Tensor product of two states, revalidated; dimension multiplies."""
    tol = max(rho1.validation_tol, rho2.validation_tol)
    return validate(np.kron(rho1.mat, rho2.mat), tol)
