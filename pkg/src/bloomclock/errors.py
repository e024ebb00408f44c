"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
numeric failures exit 3.
"""


class ConfigurationError(ValueError):
    """Invalid parameter or shape: mismatched clock widths, bad ranges, unknown topology."""


class NumericError(ArithmeticError):
    """A numerical routine failed to converge or produced a value outside its domain."""
