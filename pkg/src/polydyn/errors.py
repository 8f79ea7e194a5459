"""Exception hierarchy.

Every library error carries a stable ``code`` string so the CLI and the
experiment runner can match on failures without parsing messages.
"""


class PolydynError(Exception):
    """Base class for all domain errors raised by polydyn."""

    code = "POLYDYN_ERROR"


class DegreeBudgetExceeded(PolydynError):
    code = "DEGREE_BUDGET_EXCEEDED"


class RootFindingFailed(PolydynError):
    code = "ROOT_FINDING_FAILED"


class NoConvergence(RootFindingFailed):
    code = "NO_CONVERGENCE"


class OutsideDomain(PolydynError):
    code = "OUTSIDE_DOMAIN"


class RelationViolated(PolydynError):
    code = "RELATION_VIOLATED"


class NotPeriodic(PolydynError):
    code = "NOT_PERIODIC"


class NotBracketed(PolydynError):
    code = "NOT_BRACKETED"


class BudgetExhausted(PolydynError):
    code = "BUDGET_EXHAUSTED"


class IrrationalCriticalPoints(PolydynError):
    code = "IRRATIONAL_CRITICAL_POINTS"


class WitnessInvalid(PolydynError):
    code = "WITNESS_INVALID"


class ParseError(PolydynError):
    """Raised by the polynomial text parser.

    Attributes
    ----------
    position : int
        Character offset of the offending token.
    expected : str
        Human readable description of what the parser wanted there.
    """

    code = "PARSE_ERROR"

    def __init__(self, message, position=0, expected=""):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class IllConditionedWarning(UserWarning):
    """Root clusters wider than the conditioning threshold."""
