"""uhlfid: density-matrix fidelity via equivalent routes, verified and benchmarked.

The fidelity between two density matrices can be computed from the trace norm
of the square-root product, from the classic Hermitian sandwich, from the
principal square root of the plain product, or from the eigenvalues of the
plain product.  This package implements all four, proves their numerical
equivalence with a seeded property suite, and times the classic route against
the eigenvalue route.
"""

from .bench import BenchConfig, BenchReport, TimingStats, speedup_report, time_method
from .errors import (
    ClockError,
    ConvergenceError,
    DimensionError,
    DomainError,
    HermiticityError,
    NegativityError,
    ParseError,
    RankError,
    SpectrumError,
    TraceError,
    UhlfidError,
    UnitarityError,
    ValueDriftError,
    ZeroVectorError,
)
from .fidelity import (
    CONCRETE_METHODS,
    FidelityMethod,
    FidelityResult,
    MiszczakDecomposition,
    SpectrumReport,
    fidelity,
    fidelity_classic,
    fidelity_product_eig,
    fidelity_product_sqrt,
    fidelity_trace_norm,
    miszczak_decomposition,
    sandwich_spectrum,
)
from .matcore import (
    DEFAULT_TOL,
    HermEigResult,
    drazin_pinv_psd,
    general_eigenvalues,
    herm_eig,
    kron,
    matmul,
    psd_power,
    psd_sqrt,
    schur_sqrt,
    singular_values,
    trace,
)
from .matrixio import parse_matrix, serialize_matrix
from .states import (
    DensityMatrix,
    StateSeed,
    conjugate,
    maximally_mixed,
    pure_state,
    random_density,
    random_unitary,
    tensor,
    validate,
)
from .verify import (
    BlockStructureReport,
    SuiteReport,
    TolProfile,
    check_block_structure,
    commuting_oracle,
    run_property_suite,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BenchConfig",
    "BenchReport",
    "BlockStructureReport",
    "ClockError",
    "CONCRETE_METHODS",
    "ConvergenceError",
    "DEFAULT_TOL",
    "DensityMatrix",
    "DimensionError",
    "DomainError",
    "FidelityMethod",
    "FidelityResult",
    "HermEigResult",
    "HermiticityError",
    "MiszczakDecomposition",
    "NegativityError",
    "ParseError",
    "RankError",
    "SpectrumError",
    "SpectrumReport",
    "StateSeed",
    "SuiteReport",
    "TimingStats",
    "TolProfile",
    "TraceError",
    "UhlfidError",
    "UnitarityError",
    "ValueDriftError",
    "ZeroVectorError",
    "check_block_structure",
    "commuting_oracle",
    "conjugate",
    "drazin_pinv_psd",
    "fidelity",
    "fidelity_classic",
    "fidelity_product_eig",
    "fidelity_product_sqrt",
    "fidelity_trace_norm",
    "general_eigenvalues",
    "herm_eig",
    "kron",
    "matmul",
    "maximally_mixed",
    "miszczak_decomposition",
    "parse_matrix",
    "psd_power",
    "psd_sqrt",
    "pure_state",
    "random_density",
    "random_unitary",
    "run_property_suite",
    "sandwich_spectrum",
    "schur_sqrt",
    "serialize_matrix",
    "singular_values",
    "speedup_report",
    "tensor",
    "time_method",
    "trace",
    "validate",
]
