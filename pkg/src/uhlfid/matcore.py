"""Dense complex-matrix kernels.

Products, Hermitian and general eigendecompositions, positive-semi-definite
matrix powers, the principal square root via the complex Schur form, singular
values, and the pseudo-inverse of a PSD matrix.  Decompositions delegate to
LAPACK through numpy/scipy; everything here is a pure function of its inputs
and safe to call from multiple threads.

Numerically-PSD inputs are allowed to carry small negative eigenvalues:
magnitudes up to ``tol`` are clamped to zero, anything beyond raises
:class:`~uhlfid.errors.NegativityError`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    HermiticityError,
    NegativityError,
    SpectrumError,
)

#: Default absolute tolerance for Hermiticity/positivity checks (binary64,
#: dimensions up to a few thousand).
DEFAULT_TOL = 1e-10

#: Entrywise residual contract of the Schur square root, relative to
#: max(1, max|A|); the recurrence may zero couplings up to this size at
#: singular pivots without breaking the contract.
SQRT_RESIDUAL_TOL = 1e-8


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a square complex128 array, validating shape and finiteness."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square 2-d array, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite entries")
    return arr


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude, 0 for an empty array."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def _scale(a: np.ndarray) -> float:
    return max(1.0, max_abs(a))


def hermiticity_defect(a: np.ndarray) -> float:
    """max |A - A^dagger| entrywise."""
    return max_abs(a - a.conj().T)


def matmul(a, b) -> np.ndarray:
    """Matrix product A @ B for equal-dimension square matrices."""
    a = as_complex_matrix(a, "A")
    b = as_complex_matrix(b, "B")
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker (tensor) product; result dimension is the product of the inputs'."""
    a = as_complex_matrix(a, "A")
    b = as_complex_matrix(b, "B")
    return np.kron(a, b)


def trace(a) -> complex:
    """Sum of diagonal entries."""
    return complex(np.trace(as_complex_matrix(a)))


class HermEigResult(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted ascending; the columns of
    ``eigenvectors`` are the matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm_eig(a, tol: float = DEFAULT_TOL) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix.

    Raises HermiticityError if ``max|A - A^dagger|`` exceeds
    ``tol * max(1, max|A|)``, and ConvergenceError if the backend solver fails.
    """
    a = as_complex_matrix(a)
    defect = hermiticity_defect(a)
    bound = tol * _scale(a)
    if defect > bound:
        raise HermiticityError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds {bound:.3e}"
        )
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc
    return HermEigResult(w, v)


def general_eigenvalues(a) -> np.ndarray:
    """Eigenvalues of a general complex matrix via Schur-form QR iteration.

    Sorted by descending real part, ties broken by descending imaginary part,
    so reports built on this function are reproducible.
    """
    a = as_complex_matrix(a)
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((-lam.imag, -lam.real))
    return lam[order]


def clamped_herm_eig(a, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray, float]:
    """Eigendecomposition of a numerically-PSD matrix with negatives clamped.

    Returns ``(w, v, clamped_mass)`` where ``w`` is ascending with negative
    eigenvalues set to zero and ``clamped_mass`` is the total magnitude that
    was clamped.  Eigenvalues below ``-tol`` raise NegativityError.
    """
    w, v = herm_eig(a, tol)
    wmin = float(w[0]) if w.size else 0.0
    if wmin < -tol:
        raise NegativityError(
            f"matrix is not PSD: eigenvalue {wmin:.6e} is below -{tol:.3e}"
        )
    clamped_mass = float(np.sum(np.abs(np.minimum(w, 0.0))))
    return np.maximum(w, 0.0), v, clamped_mass


def psd_power(a, x: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Fractional power A^x of a Hermitian PSD matrix, for x in [0, 1].

    Computed as V diag(w^x) V^dagger from the clamped eigendecomposition;
    0^0 evaluates to 1, so A^0 is the full identity rather than the support
    projector.
    """
    if not np.isfinite(x) or not 0.0 <= x <= 1.0:
        raise DomainError(f"exponent must lie in [0, 1], got {x!r}")
    w, v, _ = clamped_herm_eig(a, tol)
    return (v * w**x) @ v.conj().T


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix."""
    return psd_power(a, 0.5, tol)


def _schur_sqrt_parts(a: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    """Principal square root from the complex Schur form, plus clamped mass.

    The recurrence solves R[i,j] from the entries above and to the left of it;
    a pivot whose denominator vanishes (two zero eigenvalues) is resolved to 0
    when the numerator is negligible and raises SpectrumError otherwise.
    """
    scale = _scale(a)
    # Order eigenvalues above the noise floor first: for a diagonalizable
    # matrix the trailing zero-cluster block is then exactly zero, which keeps
    # the recurrence's singular pivots free of genuine couplings.
    cluster_tol = tol * scale
    try:
        t, z, _ = scipy.linalg.schur(
            a, output="complex", sort=lambda lam: bool(abs(lam) > cluster_tol)
        )
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Schur decomposition failed: {exc}") from exc
    lam = np.diagonal(t)
    min_real = float(np.min(lam.real)) if lam.size else 0.0
    max_imag = float(np.max(np.abs(lam.imag))) if lam.size else 0.0
    if min_real < -tol:
        raise SpectrumError(
            f"eigenvalue real part {min_real:.6e} is below -{tol:.3e}"
        )
    if max_imag > tol * scale:
        raise SpectrumError(
            f"eigenvalue imaginary part {max_imag:.6e} exceeds {tol * scale:.3e}"
        )

    n = t.shape[0]
    clamp = lam.real < 0.0
    clamped_mass = float(np.sum(np.abs(lam.real[clamp])))
    diag = np.where(clamp, 0.0, lam)
    r = np.zeros_like(t)
    np.fill_diagonal(r, np.sqrt(diag))
    den_guard = tol * max(1.0, np.sqrt(scale))
    num_tol = SQRT_RESIDUAL_TOL * scale
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            num = t[i, j] - r[i, i + 1 : j] @ r[i + 1 : j, j]
            den = r[i, i] + r[j, j]
            if abs(den) > den_guard:
                r[i, j] = num / den
            elif abs(num) <= num_tol:
                r[i, j] = 0.0
            else:
                raise SpectrumError(
                    "square-root recurrence hit a singular pivot with "
                    f"non-negligible coupling ({abs(num):.3e}); no principal "
                    "square root along this spectrum"
                )
    return z @ r @ z.conj().T, clamped_mass


def schur_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a (possibly non-Hermitian) matrix.

    Requires every eigenvalue to have real part >= -tol and imaginary part of
    magnitude <= tol * max(1, max|A|); eigenvalues with small negative real
    parts are clamped to zero before square-rooting.
    """
    a = as_complex_matrix(a)
    root, _ = _schur_sqrt_parts(a, tol)
    return root


def singular_values(a) -> np.ndarray:
    """Singular values in descending order."""
    a = as_complex_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD failed: {exc}") from exc


def drazin_pinv_psd(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Pseudo-inverse of a Hermitian PSD matrix.

    Eigenvalues above ``rank_tol = tol * max_eigenvalue * n`` are inverted,
    the rest map to zero, so ``A @ D`` is the projector onto the numerical
    support of ``A``.
    """
    a = as_complex_matrix(a)
    w, v, _ = clamped_herm_eig(a, tol)
    n = a.shape[0]
    wmax = float(w[-1]) if w.size else 0.0
    rank_tol = tol * wmax * n
    inv = np.zeros_like(w)
    support = w > max(rank_tol, 0.0)
    inv[support] = 1.0 / w[support]
    return (v * inv) @ v.conj().T
