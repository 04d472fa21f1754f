"""Exception types shared across the engine."""


class SemvizError(Exception):
    """Base class for all engine errors."""


class ConfigError(SemvizError):
    """Invalid taxonomy or engine configuration."""


class FormatError(SemvizError):
    """Fatal input-format violation (e.g. a missing metadata column)."""


class BuildError(SemvizError):
    """Ingest contract violated while building the index."""


class QueryError(SemvizError):
    """Malformed query: unknown field, bad parameter, inconsistent request.

    Carries the offending field name (when one exists) so API layers can
    return structured errors instead of bare strings.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class NotFoundError(SemvizError):
    """Lookup of a document or functional type that does not exist."""
