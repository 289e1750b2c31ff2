"""Error taxonomy shared across the toolkit.

DataError covers malformed or inconsistent input (CLI exit code 2),
NumericError covers numerical failures such as singular matrices or
infeasible parameters (CLI exit code 3).
"""


class MoralstatError(Exception):
    """Base class for all toolkit errors."""


class DataError(MoralstatError):
    """Invalid, missing, or inconsistent input data."""


class NumericError(MoralstatError):
    """Numerical failure: singularity, infeasible parameter, bad domain."""
