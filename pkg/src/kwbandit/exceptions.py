"""Exception hierarchy for kwbandit.

Everything derives from ValueError so callers that only care about
"bad input" can catch one type.
"""


class KWBanditError(ValueError):
    """Base class for all kwbandit errors."""


class DomainViolationError(KWBanditError):
    """A point was used outside the feasible box."""


class ContractionViolationError(KWBanditError):
    """The step size does not yield a contraction factor below one."""


class MeanValueConditionError(KWBanditError):
    """The gradient-offset radius is not below c**2."""


class ConfigValidationError(KWBanditError):
    """A config document failed validation.

    Carries the full list of problems, not just the first one.
    """

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid config:\n" + "\n".join(f"  - {e}" for e in self.errors))
