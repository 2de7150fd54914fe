"""Exception hierarchy shared by all uhlfid modules.

Every error raised by the library derives from :class:`UhlfidError`.  The
command-line front end groups them into input-validation failures and
numerical failures when mapping to exit codes.
"""


class UhlfidError(Exception):
    """Base class for all errors raised by uhlfid."""


class DimensionError(UhlfidError):
    """Matrix shapes are incompatible or an entry count does not match."""


class HermiticityError(UhlfidError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NegativityError(UhlfidError):
    """A matrix required to be positive semi-definite has an eigenvalue below -tol."""


class TraceError(UhlfidError):
    """A density matrix does not have unit trace within tolerance."""


class DomainError(UhlfidError):
    """A scalar argument lies outside its documented domain."""


class SpectrumError(UhlfidError):
    """A spectrum violates the preconditions of a matrix function or gate."""


class ConvergenceError(UhlfidError):
    """The backend decomposition failed to converge."""


class ZeroVectorError(UhlfidError):
    """A state vector with zero norm cannot be normalized."""


class UnitarityError(UhlfidError):
    """A matrix required to be unitary is not, beyond tolerance."""


class RankError(UhlfidError):
    """A rank precondition (e.g. rank deficiency) does not hold."""


class ParseError(UhlfidError):
    """A matrix file is malformed; the message carries the position."""


class ClockError(UhlfidError):
    """The timing clock produced a non-positive duration."""


class ValueDriftError(UhlfidError):
    """Repeated evaluations of the same input produced drifting values."""


#: Errors that indicate bad input; the CLI maps these to exit code 2.
VALIDATION_ERRORS = (
    DimensionError,
    HermiticityError,
    NegativityError,
    TraceError,
    DomainError,
    ZeroVectorError,
    UnitarityError,
    RankError,
    ParseError,
)

#: Errors that indicate a numerical failure; the CLI maps these to exit code 3.
NUMERICAL_ERRORS = (
    SpectrumError,
    ConvergenceError,
    ClockError,
    ValueDriftError,
)
