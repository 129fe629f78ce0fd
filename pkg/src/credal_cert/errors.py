"""Error taxonomy shared across the package.

Two families matter to callers: problems with what the user handed us
(`InputError`, exit code 1 at the CLI) and problems the numerics ran into
while computing (`NumericalError`, exit code 2).
"""


class InputError(ValueError):
    """Invalid user input: bad shapes, non-finite values, malformed files,
    out-of-range parameters, or contradictory configuration."""


class ParseError(InputError):
    """Malformed input file; message names the file and offending line."""


class NumericalError(ArithmeticError):
    """A computation could not be completed to acceptable accuracy."""


class DegenerateBandwidthError(NumericalError):
    """Median pairwise distance is zero, so no bandwidth can be inferred."""


class SingularSystemError(NumericalError):
    """Kernel system is singular beyond what the ridge term can absorb."""


class SingularityError(NumericalError):
    """A formula was evaluated at a parameter point where it diverges."""
