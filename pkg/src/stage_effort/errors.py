"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`StageEffortError`. The CLI maps the three families below to exit
codes: usage/schema problems (2), data insufficiency (3) and impossible
predictions (4).
"""


class StageEffortError(Exception):
    """Base class for all package errors."""


class UsageError(StageEffortError, ValueError):
    """Bad input shape, bad parameter or malformed file."""


class DataInsufficientError(StageEffortError):
    """Not enough (usable) data for the requested computation."""


class PredictionError(StageEffortError):
    """A prediction could not be produced."""


class SchemaError(UsageError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ParseError(UsageError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ParameterError(UsageError):
    pass


class ConfigurationError(UsageError):
    pass


class ConsistencyError(StageEffortError):
    """Internal invariant violated by the caller's input (e.g. a frequent
    itemset map that is not downward closed)."""


class DegenerateUniverseError(UsageError):
    pass


class EmptyDatasetError(DataInsufficientError):
    pass


class PolicyError(DataInsufficientError):
    pass


class FitError(DataInsufficientError):
    pass


class DegenerateTestError(DataInsufficientError):
    pass


class UndefinedMetricError(StageEffortError, ArithmeticError):
    pass


class NoApplicableRulesError(PredictionError):
    pass
