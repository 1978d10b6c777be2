"""Semantic exceptions shared across the package."""


class IndsumError(Exception):
    """Base class for numerical failures raised by this package."""


class TruncationError(IndsumError):
    """A truncated series cannot reach the requested tolerance within max_terms."""


class HorizonError(IndsumError):
    """A requested time/index lies beyond the solvable or built horizon."""


class BisectionError(IndsumError):
    """A level-crossing search failed to bracket its target."""
