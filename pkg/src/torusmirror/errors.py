"""Exception hierarchy shared by all modules."""


class TorusMirrorError(Exception):
    """Base class for every error raised by the package."""


class InputError(TorusMirrorError, ValueError):
    """Malformed input: wrong shapes, unparsable config, bad arguments."""


class MisuseError(TorusMirrorError):
    """Operation called in a state where it is not defined."""


class ConvergenceError(TorusMirrorError, ArithmeticError):
    """A theta series cannot converge (imaginary part not positive definite)."""


class PrecisionError(TorusMirrorError, ArithmeticError):
    """Requested accuracy is not reachable within the configured limits."""


class SingularParameterError(TorusMirrorError, ArithmeticError):
    """A closed-form expression hits a vanishing denominator."""


class DegenerateInputError(InputError):
    """Input that is formally valid but numerically degenerate (e.g. a zero target)."""


class UnsupportedError(TorusMirrorError):
    """Feature intentionally not provided for this kind of input."""
