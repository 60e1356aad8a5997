"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: validation-type errors (bad flags,
unreadable or malformed inputs, misuse of an operation) exit with 2,
computation-type errors (fit failures, infeasible designs, degenerate
data) exit with 1.
"""


class EegxError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(EegxError):
    """Invalid input or configuration, detected before computing."""

    exit_code = 2


class FormatError(ValidationError):
    """Structurally malformed input file (header, column counts)."""


class DataError(ValidationError):
    """Unusable numeric content (non-numeric cell, NaN/Inf)."""


class UsageError(ValidationError):
    """An operation was called in a way its contract forbids."""


class ChannelLookupError(ValidationError):
    """A requested channel name does not exist in the recording."""


class SizeError(EegxError):
    """Too little data to carry out the computation."""


class DesignError(EegxError):
    """Requested filter cannot be realized at this sampling rate."""


class DomainError(EegxError):
    """Arguments lie outside the mathematical domain of an operation."""


class FitError(EegxError):
    """An estimator failed to converge or had nothing to fit."""


class SparseTailError(EegxError):
    """Too few joint tail exceedances to estimate dependence."""
