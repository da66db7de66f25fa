"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where the operation is defined."""


class ValidationError(ValueError):
    """Malformed model or quotient data."""


class DegenerateSpecError(ValueError):
    """The edge-energy table has a single value, so no energy gap exists."""


class StructureError(RuntimeError):
    """A structural identity that must hold by construction was violated."""


class BudgetError(RuntimeError):
    """The requested computation exceeds the configured size budget."""
