"""Exception types shared across the toolkit."""


class PotapproxError(Exception):
    """Base class for errors raised by this package."""


class NumericsError(PotapproxError):
    """A numerical routine failed to meet its accuracy contract.

    Raised for ill-conditioned linear systems, non-convergent quadrature,
    exchange cycling, and failed internal cross-checks.
    """


class VerificationError(PotapproxError):
    """A bound that must hold unconditionally was violated.

    The inequalities checked by the verification module are proved facts
    for the geometries we accept, so a violation indicates a defect in an
    evaluator, not in the input.
    """
