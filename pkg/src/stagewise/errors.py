"""Exception hierarchy shared by the construction modules.

Everything a construction can refuse to do derives from ``ConstructionError``
so the scenario runner can map it to a single exit code.
"""


class ConstructionError(Exception):
    """A construction precondition failed."""


class PrefixConflict(ConstructionError):
    pass


class CapacityExceeded(ConstructionError):
    pass


class NonMonotoneTarget(ConstructionError):
    pass


class NotPrefixFreeLimit(ConstructionError):
    pass


class QTooSmall(ConstructionError):
    pass


class NoExponent(ConstructionError):
    pass


class MonotonicityBreak(ConstructionError):
    pass


class ConeNotEmpty(ConstructionError):
    pass


class TargetOutOfRange(ConstructionError):
    pass


class NonMonotoneOuter(ConstructionError):
    pass


class HorizonExceeded(ConstructionError):
    pass


class ConfigError(ValueError):
    """A scenario document is malformed; the message names the offending key."""
