"""Exception types shared across the package."""


class GaussimError(Exception):
    """Base class for all package-specific errors."""


class PhysicalityError(GaussimError, ValueError):
    """A covariance matrix violates the quantum uncertainty bound."""


class CPViolationError(GaussimError, ValueError):
    """A Gaussian map fails the complete-positivity condition."""


class ParseError(GaussimError, ValueError):
    """Circuit source could not be parsed.

    Attributes:
        line: 1-based line number of the offending token.
        col: 1-based column number of the offending token.
    """

    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ExecutionError(GaussimError, RuntimeError):
    """A circuit instruction failed during execution.

    Attributes:
        index: 0-based index of the instruction that failed.
    """

    def __init__(self, index, message):
        super().__init__(f"instruction {index}: {message}")
        self.index = index
