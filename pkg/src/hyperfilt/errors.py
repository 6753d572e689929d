"""Exception types shared across the package."""


class HyperfiltError(Exception):
    """Base class for all package errors."""


class DomainError(HyperfiltError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapabilityError(HyperfiltError):
    """The request exceeds what the implementation can resolve (order, overflow)."""


class ContractError(HyperfiltError, ValueError):
    """Inputs are individually valid but inconsistent with each other."""


class IntegrityError(HyperfiltError):
    """A file failed a checksum or structural consistency check."""


class QuadratureError(HyperfiltError, RuntimeError):
    """A quadrature construction or evaluation failed an internal check."""
