"""Exception hierarchy for schwarzmod."""


class SchwarzModError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SchwarzModError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateInputError(SchwarzModError, ValueError):
    """Coincident points, infinite-radius circle fits and similar."""


class SingularityError(SchwarzModError):
    """Evaluation at (or integration through) a pole of the Schwarzian."""


class PoleOnRayError(SchwarzModError):
    """The denominator v vanishes at the end of a probe ray."""


class StiffnessError(SchwarzModError):
    """The ODE integrator exhausted its step budget."""


class IntegrationAccuracyError(SchwarzModError):
    """Symmetry diagnostics show the boundary values are not trustworthy."""


class BracketError(SchwarzModError):
    """A bisection interval does not contain a sign change.

    ``values`` holds the diagnostic endpoint data.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values or {}


class InfeasibleBracketError(BracketError):
    """The located gamma bracket is empty (A_gamma >= B_gamma)."""


class ConvergenceError(SchwarzModError):
    """The nested bisection did not produce a consistent solution."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


class RefinementEscapeError(ConvergenceError):
    """The refined solution left the epsilon box around its seed."""
