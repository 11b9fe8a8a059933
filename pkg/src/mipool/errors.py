"""Exception hierarchy for mipool.

Errors are grouped by how the command line maps them to exit codes:
validation problems (bad arguments, malformed tables) exit with 2,
numeric failures (degenerate inputs, non-convergence) exit with 3,
and I/O problems exit with 4.
"""


class MiPoolError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(MiPoolError, ValueError):
    """An argument violates a documented precondition."""


class EmptyInputError(InvalidArgumentError):
    """A sequence that must be non-empty was empty."""


class DegenerateGroupError(InvalidArgumentError):
    """A group has fewer than two observations."""


class InsufficientImputationsError(InvalidArgumentError):
    """Fewer imputations than the pooling rule requires."""


class InsufficientDataError(InvalidArgumentError):
    """Too few complete cases to fit the imputation model."""


class ModelSpecError(InvalidArgumentError):
    """A model effect references an unknown factor."""


class NumericError(MiPoolError):
    """Base class for numeric and convergence failures."""


class ZeroVarianceError(NumericError):
    """A within-group variance is zero where a positive one is required."""


class ZeroNumeratorError(NumericError):
    """A numerator mean square is zero, so reciprocal pooling is undefined."""


class ZeroStatisticError(NumericError):
    """A chi-square statistic is zero, so its reciprocal is undefined."""


class ZeroDenominatorDfError(NumericError):
    """No residual degrees of freedom remain."""


class RankError(NumericError):
    """A design matrix is rank deficient."""


class CollinearityError(NumericError):
    """The imputation regression has a singular cross-product matrix."""


class ConvergenceError(NumericError):
    """An iterative fit failed to converge within its iteration cap."""


class SingularCovarianceError(NumericError):
    """A covariance update produced a singular matrix."""


class ContrastSingularityError(NumericError):
    """A contrast covariance block is singular."""


class NestingViolationError(NumericError):
    """A reduced model has a higher log-likelihood than its full model."""


class SchemaError(MiPoolError):
    """An input table does not match the expected schema."""


class IntegrityError(SchemaError):
    """A table parses but fails a consistency requirement."""
