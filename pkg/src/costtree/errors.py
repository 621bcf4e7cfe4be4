"""Exception types shared across the package."""


class CostTreeError(Exception):
    """Base class for all library errors."""


class DataFormatError(CostTreeError):
    """Malformed dataset/cost/tree file or schema violation."""


class UnsupportedFeatureError(CostTreeError):
    """Requested feature is deliberately not supported (e.g. delayed tests)."""
