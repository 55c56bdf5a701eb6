"""Exception hierarchy for cdkernel.

Errors split into two families: ``InputError`` for malformed data or
violated preconditions (the CLI maps these to exit code 2) and
``NumericalError`` for failures discovered while computing (exit code 3).
"""


class CDKernelError(Exception):
    """Base class for all package errors."""


class InputError(CDKernelError, ValueError):
    """Invalid argument, file or configuration."""


class NumericalError(CDKernelError, ArithmeticError):
    """A computation could not be completed reliably."""


class EmptyMeasure(InputError):
    """A measure would have no atoms."""


class NonpositiveWeight(InputError):
    """A measure weight is zero, negative or not finite."""


class NonfiniteNode(InputError):
    """A measure node is NaN or infinite."""


class ParseError(InputError):
    """A measure or config file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number of the offending row, when known.
    """

    def __init__(self, msg, line=None):
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)
        self.line = line


class ConfigError(InputError):
    """An experiment configuration is invalid."""


class DominationViolated(InputError):
    """Two measures were expected to be ordered but are not."""


class RankDeficient(NumericalError):
    """The inner product is (numerically) degenerate on the polynomial space."""


class NoConvergence(NumericalError):
    """An iterative eigensolver exceeded its sweep cap."""


class BaseLocus(NumericalError):
    """The kernel diagonal vanishes at the requested point."""


class DenominatorVanishes(NumericalError):
    """A rational symbol has a pole on the support of the measure."""
