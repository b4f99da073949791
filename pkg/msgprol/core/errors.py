"""Error hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI uses when it escapes a
command: 3 for configuration/data problems, 4 for numerical failures.
"""

EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


class MsgprolError(Exception):
    """Base class for all errors raised by msgprol."""
    exit_code: int = 1


# --- Configuration / data errors (exit 3) ---

class ConfigurationError(MsgprolError):
    exit_code = EXIT_CONFIG


class ShapeError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class InvalidSizeError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class DisconnectedGraphError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class SymmetryError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class OrientationError(MsgprolError, ValueError):
    """Raised when a matching is requested with n1 > n2."""
    exit_code = EXIT_CONFIG


class SizeLimitError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class DomainError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class CompositionError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class FormatError(MsgprolError, ValueError):
    exit_code = EXIT_CONFIG


class LengthError(FormatError):
    pass


class ParseError(FormatError):
    pass


class DataIOError(MsgprolError, OSError):
    exit_code = EXIT_CONFIG


# --- Numerical errors (exit 4) ---

class NumericalFailureError(MsgprolError, ArithmeticError):
    exit_code = EXIT_NUMERICAL


class DegenerateScaleError(NumericalFailureError):
    pass


class ConstraintError(NumericalFailureError):
    """An iterate or initial point left the Stiefel manifold."""
    pass
