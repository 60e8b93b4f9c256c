"""Exception hierarchy shared across the package.

Anything raised on bad input data, bad configuration, or bad usage derives
from WikicatError so the CLI can distinguish anticipated failures (exit code
2) from genuine bugs (exit code 3).
"""


class WikicatError(Exception):
    """Base class for all anticipated errors."""


class GraphFormatError(WikicatError):
    """A graph file is malformed or fails validation."""


class TaxonomyError(WikicatError):
    """A taxonomy, override table, or mapping is invalid."""


class ConfigurationError(WikicatError):
    """A parameter value or API call is invalid."""
