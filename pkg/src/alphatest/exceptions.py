"""Exception types shared across the package."""


class AlphaTestError(Exception):
    """Base class for all errors raised by this package."""


class DataFormatError(AlphaTestError):
    """Malformed or inconsistent input data (CSV parsing, shape problems)."""


class DegenerateEstimateError(AlphaTestError):
    """A statistic or estimator is numerically degenerate.

    Carries the offending ``value`` when one exists (for example a
    non-positive variance estimate).
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class StudyError(AlphaTestError):
    """A Monte Carlo study aborted because one replication failed.

    ``replication`` identifies the failing replication index.
    """

    def __init__(self, message, replication=None):
        super().__init__(message)
        self.replication = replication
