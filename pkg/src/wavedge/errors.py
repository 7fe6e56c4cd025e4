"""Error types shared across the package.

The CLI maps these onto its exit-code contract: parameter errors exit 2,
data-format errors exit 3, and plain I/O failures (OSError) exit 1.
"""


class ParameterError(ValueError):
    """An argument or configuration value is outside its allowed range."""


class FormatError(ValueError):
    """A file or byte stream does not match its declared format."""
