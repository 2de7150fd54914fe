"""Fidelity between density matrices, computed along every equivalent route.

The fidelity F(rho, sigma) = [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2 can be
evaluated four ways that agree to numerical precision:

* ``TRACE_NORM``   -- squared sum of singular values of sqrt(rho) sqrt(sigma);
* ``CLASSIC``      -- the textbook sandwich form above (two Hermitian square
  roots, two products, one trace);
* ``PRODUCT_SQRT`` -- squared trace of the principal square root of the
  plain product rho sigma;
* ``PRODUCT_EIG``  -- squared sum of square-rooted eigenvalues of rho sigma,
  the cheapest route since it needs one product and one eigenvalue call.

rho sigma is similar to the Hermitian sandwich whenever rho is invertible and
shares its nonzero spectrum with it even when rho is rank-deficient, which is
why the product routes are valid.  The eigenvalues of rho sigma are real and
non-negative in exact arithmetic; tiny imaginary parts and negative dust are
clamped, recorded in the result, and rejected beyond a hard gate.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, DomainError, SpectrumError
from .matcore import (
    DEFAULT_TOL,
    _schur_sqrt_parts,
    clamped_herm_eig,
    general_eigenvalues,
    herm_eig,
    psd_power,
    singular_values,
)
from .states import DensityMatrix

#: Hard gates on the product spectrum: max |Im lambda| <= IMAG_GATE * n and
#: total clamped negativity <= CLAMP_GATE, else SpectrumError.
IMAG_GATE = 1e-8
CLAMP_GATE = 1e-8


class FidelityMethod(enum.Enum):
    """Selectable computation route; AUTO resolves to PRODUCT_EIG."""

    TRACE_NORM = "trace-norm"
    CLASSIC = "classic"
    PRODUCT_SQRT = "product-sqrt"
    PRODUCT_EIG = "product-eig"
    AUTO = "auto"

    def resolve(self) -> "FidelityMethod":
        return FidelityMethod.PRODUCT_EIG if self is FidelityMethod.AUTO else self


#: Concrete methods, in report order.
CONCRETE_METHODS = (
    FidelityMethod.TRACE_NORM,
    FidelityMethod.CLASSIC,
    FidelityMethod.PRODUCT_SQRT,
    FidelityMethod.PRODUCT_EIG,
)


@dataclass(frozen=True)
class FidelityResult:
    """Fidelity value plus numerical diagnostics.

    ``value`` is clipped to [0, 1]; ``raw_value`` keeps the unclipped number.
    ``max_imag_residual`` is the largest imaginary magnitude encountered
    (0 for the Hermitian routes) and ``clamped_mass`` the total negativity
    clamped to zero along the way.
    """

    value: float
    raw_value: float
    method: FidelityMethod
    max_imag_residual: float
    clamped_mass: float
    elapsed_seconds: float


def _require_same_dim(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.dim != sigma.dim:
        raise DimensionError(f"state dimensions differ: {rho.dim} vs {sigma.dim}")


def _pack(raw: float, method: FidelityMethod, max_imag: float, clamped: float,
          t0: float) -> FidelityResult:
    return FidelityResult(
        value=min(max(raw, 0.0), 1.0),
        raw_value=raw,
        method=method,
        max_imag_residual=max_imag,
        clamped_mass=clamped,
        elapsed_seconds=time.perf_counter() - t0,
    )


def _sqrt_factor(mat: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    """PSD square root of a state matrix together with its clamped mass."""
    w, v, clamped = clamped_herm_eig(mat, tol)
    return (v * np.sqrt(w)) @ v.conj().T, clamped


def fidelity_trace_norm(rho: DensityMatrix, sigma: DensityMatrix,
                        tol: float = DEFAULT_TOL) -> FidelityResult:
    """Fidelity as the squared trace norm of sqrt(rho) sqrt(sigma)."""
    _require_same_dim(rho, sigma)
    t0 = time.perf_counter()
    s_rho, c_rho = _sqrt_factor(rho.mat, tol)
    s_sigma, c_sigma = _sqrt_factor(sigma.mat, tol)
    sv = singular_values(s_rho @ s_sigma)
    raw = float(np.sum(sv)) ** 2
    return _pack(raw, FidelityMethod.TRACE_NORM, 0.0, c_rho + c_sigma, t0)


def fidelity_classic(rho: DensityMatrix, sigma: DensityMatrix,
                     tol: float = DEFAULT_TOL) -> FidelityResult:
    """Fidelity in the sandwich form [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.

    This is the baseline route the benchmarks compare against: two Hermitian
    matrix square roots, two matrix products, and a trace.
    """
    _require_same_dim(rho, sigma)
    t0 = time.perf_counter()
    s_rho, c_rho = _sqrt_factor(rho.mat, tol)
    sandwich = s_rho @ sigma.mat @ s_rho
    root, c_m = _sqrt_factor(sandwich, tol)
    raw = float(np.trace(root).real) ** 2
    return _pack(raw, FidelityMethod.CLASSIC, 0.0, c_rho + c_m, t0)


def fidelity_product_sqrt(rho: DensityMatrix, sigma: DensityMatrix,
                          tol: float = DEFAULT_TOL) -> FidelityResult:
    """Fidelity as [Tr sqrt(rho sigma)]^2 with a literal matrix square root.

    Slower than the eigenvalue route (the principal root of a non-Hermitian
    product needs a full Schur form) but cross-validates it.
    """
    _require_same_dim(rho, sigma)
    t0 = time.perf_counter()
    root, clamped = _schur_sqrt_parts(rho.mat @ sigma.mat, tol)
    tr = complex(np.trace(root))
    raw = tr.real**2
    return _pack(raw, FidelityMethod.PRODUCT_SQRT, abs(tr.imag), clamped, t0)


def _product_spectrum(prod: np.ndarray, dim: int) -> tuple[np.ndarray, float, float]:
    """Eigenvalues of a state product with the imaginary/negativity gates applied."""
    lam = general_eigenvalues(prod)
    max_imag = float(np.max(np.abs(lam.imag))) if lam.size else 0.0
    clamped = float(np.sum(np.abs(np.minimum(lam.real, 0.0))))
    if max_imag > IMAG_GATE * dim:
        raise SpectrumError(
            f"product spectrum has imaginary residual {max_imag:.6e}, "
            f"above the gate {IMAG_GATE * dim:.3e}"
        )
    if clamped > CLAMP_GATE:
        raise SpectrumError(
            f"product spectrum has clamped negativity {clamped:.6e}, "
            f"above the gate {CLAMP_GATE:.3e}"
        )
    return lam, max_imag, clamped


def fidelity_product_eig(rho: DensityMatrix, sigma: DensityMatrix,
                         tol: float = DEFAULT_TOL) -> FidelityResult:
    """Fidelity as the squared sum of square-rooted eigenvalues of rho sigma.

    The recommended route: one matrix product and one general eigenvalue
    computation, no square-root matrices at all.
    """
    _require_same_dim(rho, sigma)
    t0 = time.perf_counter()
    lam, max_imag, clamped = _product_spectrum(rho.mat @ sigma.mat, rho.dim)
    raw = float(np.sum(np.sqrt(np.maximum(lam.real, 0.0)))) ** 2
    return _pack(raw, FidelityMethod.PRODUCT_EIG, max_imag, clamped, t0)


_DISPATCH = {
    FidelityMethod.TRACE_NORM: fidelity_trace_norm,
    FidelityMethod.CLASSIC: fidelity_classic,
    FidelityMethod.PRODUCT_SQRT: fidelity_product_sqrt,
    FidelityMethod.PRODUCT_EIG: fidelity_product_eig,
}


def fidelity(rho: DensityMatrix, sigma: DensityMatrix,
             method: FidelityMethod = FidelityMethod.AUTO,
             tol: float = DEFAULT_TOL) -> FidelityResult:
    """Compute the fidelity with the chosen method (AUTO -> PRODUCT_EIG)."""
    if not isinstance(method, FidelityMethod):
        raise DomainError(f"unknown fidelity method {method!r}")
    return _DISPATCH[method.resolve()](rho, sigma, tol)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Spectrum of the sandwich rho^x sigma rho^(1-x).

    ``eigenvalues`` follow the kernel ordering (descending real part);
    ``negativity`` is the total magnitude of negative real parts.
    """

    x: float
    eigenvalues: np.ndarray
    max_imag: float
    negativity: float


def sandwich_spectrum(rho: DensityMatrix, sigma: DensityMatrix, x: float,
                      tol: float = DEFAULT_TOL) -> SpectrumReport:
    """Eigenvalues of rho^x sigma rho^(1-x) for x in [0, 1].

    The spectrum is independent of x; x = 1/2 gives the Hermitian sandwich
    and takes the exact Hermitian eigensolver path.
    """
    _require_same_dim(rho, sigma)
    if not np.isfinite(x) or not 0.0 <= x <= 1.0:
        raise DomainError(f"sandwich exponent must lie in [0, 1], got {x!r}")
    if x == 0.5:
        s, _ = _sqrt_factor(rho.mat, tol)
        w = herm_eig(s @ sigma.mat @ s, tol).eigenvalues
        lam = w[::-1].astype(np.complex128)
        negativity = float(np.sum(np.abs(np.minimum(w, 0.0))))
        return SpectrumReport(x=x, eigenvalues=lam, max_imag=0.0, negativity=negativity)
    left = psd_power(rho.mat, x, tol)
    right = psd_power(rho.mat, 1.0 - x, tol)
    lam = general_eigenvalues(left @ sigma.mat @ right)
    max_imag = float(np.max(np.abs(lam.imag))) if lam.size else 0.0
    negativity = float(np.sum(np.abs(np.minimum(lam.real, 0.0))))
    return SpectrumReport(x=x, eigenvalues=lam, max_imag=max_imag, negativity=negativity)


class MiszczakDecomposition(NamedTuple):
    """Fidelity split into state overlap plus a non-negative cross term."""

    overlap: float
    correction: float


def miszczak_decomposition(rho: DensityMatrix,
                           sigma: DensityMatrix) -> MiszczakDecomposition:
    """Split F into Tr(rho sigma) + 2 sum_{j<k} sqrt(lambda_j lambda_k).

    The lambdas are the clamped real eigenvalues of rho sigma; the two pieces
    sum to the product-eigenvalue fidelity.  When either state is pure the
    product has rank at most 1 and the correction vanishes.
    """
    _require_same_dim(rho, sigma)
    prod = rho.mat @ sigma.mat
    overlap = float(np.trace(prod).real)
    lam, _, _ = _product_spectrum(prod, rho.dim)
    roots = np.sqrt(np.maximum(lam.real, 0.0))
    pairs = np.outer(roots, roots)
    correction = 2.0 * float(np.sum(pairs[np.triu_indices(len(roots), 1)]))
    return MiszczakDecomposition(overlap=overlap, correction=correction)
