"""Exception hierarchy shared by the whole package."""


class CarevError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStateError(CarevError):
    """A cell state or digit lies outside the alphabet."""


class InvalidArgumentError(CarevError):
    """An argument violates a documented precondition."""


class RuleNumberOverflowError(CarevError):
    """A rule number does not fit the p^(p^k) rule space."""


class CapacityError(CarevError):
    """The requested geometry exceeds the configured bitset-width cap."""


class BudgetError(CarevError):
    """An enumeration or bucket budget was exceeded."""


class CheckpointError(CarevError):
    """A sweep checkpoint journal is corrupt or belongs to another sweep."""
