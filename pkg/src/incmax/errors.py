"""Exception types shared across the package."""


class IncmaxError(Exception):
    """Base class for all errors raised by this package."""


class UniverseTooLarge(IncmaxError):
    """Exhaustive search over subsets was requested for too large a ground set."""


class NotAccountable(IncmaxError):
    """An objective fails the per-subset removal guarantee.

    The offending subset is attached so callers can inspect it.
    """

    def __init__(self, subset, message=None):
        self.subset = frozenset(subset)
        super().__init__(message or f"no safe removal from {sorted(self.subset)}")


class InvalidSizes(IncmaxError):
    """A solution size sequence violates its validity constraints."""


class EmptyInstance(IncmaxError):
    """An instance with no sets (or no breakpoints) was supplied."""


class NotNormalized(IncmaxError):
    """An operation that requires canonical form got a raw instance."""


class SizeOutOfRange(IncmaxError):
    """A query size lies outside the instance's defined range."""


class InstanceTooLarge(IncmaxError):
    """Exhaustive solution enumeration was requested above the size cap."""


class InvalidPoints(IncmaxError):
    """Breakpoints fail the monotone growth constraints for a value curve."""


class DomainExhausted(IncmaxError):
    """A target value exceeds everything a bounded curve can ever reach."""


class InvalidStart(IncmaxError):
    """A scaling run was started from a non-positive first block size."""


class DensityFloorReached(IncmaxError):
    """The required density fell to or below the curve's limiting density.

    On such curves the set of admissible next sizes is unbounded and a
    largest choice does not exist.  Supply a curve whose density decays
    towards zero (for example a tilted identity) to avoid this.
    """


class EpsilonTooLarge(IncmaxError):
    """The slack parameter is too coarse for the construction to go through."""


class RhoTooLarge(IncmaxError):
    """No violation index exists at this ratio; the construction needs a smaller one."""


class HypothesisViolated(IncmaxError):
    """Inputs do not satisfy the hypothesis under which a bound is proven."""


class NTooLarge(IncmaxError):
    """Algorithm enumeration was requested above the horizon cap."""
