"""Exception hierarchy shared by all biharm modules."""

from __future__ import annotations


class BiharmError(Exception):
    """Base class for every error raised by this package."""


class NotInvertible(BiharmError, ZeroDivisionError):
    """The element has (numerically) zero component along the identity."""


class MapInvalid(BiharmError, ValueError):
    pass


class InvalidNodeCount(BiharmError, ValueError):
    pass


class PointTooCloseToBoundary(BiharmError, ValueError):
    pass


class PointOutsideRequestedRegion(BiharmError, ValueError):
    pass


class DataLengthMismatch(BiharmError, ValueError):
    pass


class IllConditioned(BiharmError, ArithmeticError):
    """Second-smallest singular value collapsed; assembly or map is broken."""


class DisconnectedLattice(BiharmError, ValueError):
    pass


class DegenerateTangent(BiharmError, ValueError):
    pass


class ConfigInvalid(BiharmError, ValueError):
    pass


class NotANode(BiharmError, ValueError):
    """Boundary limits are only available at grid nodes."""
