"""Shared exception types."""


class DimensionError(ValueError):
    """Invalid or incompatible dimensions (non-square input, mismatched n, n < 1)."""


class StochasticityError(ValueError):
    """Row sums or signs violate the stochastic-matrix contract."""


class NegativityError(StochasticityError):
    """An entry is more negative than the clamping tolerance allows."""


class ContractViolation(ValueError):
    """A documented precondition was violated by the caller."""


class CertificationRefused(RuntimeError):
    """Certification was refused because a structural hypothesis fails."""

    def __init__(self, reasons):
        self.reasons = tuple(reasons)
        super().__init__("certification refused: " + ", ".join(self.reasons))
