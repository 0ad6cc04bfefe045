"""Exception hierarchy shared by the pipeline modules."""


class QformcError(Exception):
    """Base class for domain failures (mapped to exit code 1 by the CLI)."""


class DimensionError(QformcError, ValueError):
    pass


class SingularMatrixError(QformcError, ValueError):
    pass


class SizeLimitError(QformcError, ValueError):
    """A dense oracle was asked to enumerate more than its configured cap."""


class CompositionError(QformcError, ValueError):
    pass


class FractionalEdgeError(QformcError, ValueError):
    pass


class InvalidFlowError(QformcError, ValueError):
    pass


class NoFlowError(QformcError):
    pass


class ScheduleError(QformcError):
    pass


class InvalidTableauError(QformcError, ValueError):
    pass


class UnsupportedGateError(QformcError, ValueError):
    pass


class FormatError(ValueError):
    """Malformed input file (mapped to exit code 2 by the CLI)."""
