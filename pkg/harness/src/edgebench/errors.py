class ConfigError(ValueError):
    """Experiment specification is inconsistent or impossible."""


class FormatError(ValueError):
    """Input bytes do not match the layout they claim."""
