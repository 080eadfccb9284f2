"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """A caller broke an operation's precondition (shape, ordering, lifecycle)."""


class DomainError(ValueError):
    """A numerical input lies outside the domain where a model is defined."""
