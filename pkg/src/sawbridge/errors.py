"""Exception types shared across the package."""


class WalkError(ValueError):
    """Malformed walk data, or an operation applied outside its domain."""


class ParseError(WalkError):
    """Rejected text in the step format."""


class DimensionMismatch(WalkError):
    """Two walks (or a walk and a point) of different dimension."""


class NotSelfAvoiding(WalkError):
    """A walk revisits a lattice point where self-avoidance is required."""


class NotBridge(WalkError):
    """A walk fails the bridge conditions where a bridge is required."""


class SurgeryError(WalkError):
    """Surgery parameters that do not name a valid zigzag or diamond site."""


class BudgetExceeded(RuntimeError):
    """An exact-enumeration request beyond the configured budget."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates a bug, not bad input."""
