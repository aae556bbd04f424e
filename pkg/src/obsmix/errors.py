"""Exception hierarchy.

Each exception carries the process exit code the command-line front end
reports when the error escapes a subcommand.
"""


class ObsmixError(Exception):
    exit_code = 1


class ConfigError(ObsmixError, ValueError):
    exit_code = 2


class DomainError(ObsmixError, ValueError):
    """A numerical input lies outside the domain of an operation."""

    exit_code = 3


class InvalidLabel(DomainError):
    """A macrostate label does not fit the box geometry."""


class OutOfRange(DomainError):
    """Target entropy cannot be reached on the non-negative temperature branch."""

    def __init__(self, target, lower, upper):
        self.target = target
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"entropy target {target!r} outside solvable range [{lower!r}, {upper!r}]"
        )


class Degenerate(DomainError):
    """Quantity undefined because the input is degenerate (e.g. a flat spectrum)."""


class ConvergenceError(DomainError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class VerificationError(ObsmixError):
    exit_code = 4
