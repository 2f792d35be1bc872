"""Exception hierarchy.

Every domain error carries a stable ``name`` so the CLI can report it in
machine-readable form.
"""


class CurveGraphError(Exception):
    """Base class for all domain errors raised by the package."""

    @property
    def name(self):
        return type(self).__name__

    def to_dict(self):
        out = {"error": self.name, "message": str(self)}
        for key in ("partial", "state", "violation", "result"):
            val = getattr(self, key, None)
            if val is not None:
                out[key] = val.to_json() if hasattr(val, "to_json") else val
        return out


class TrivialClass(CurveGraphError):
    pass


class ConstructionFailure(CurveGraphError):
    pass


class PrecisionOverflow(CurveGraphError):
    pass


class NotHyperbolic(CurveGraphError):
    pass


class FingerprintContradiction(CurveGraphError):
    """Symbolic and numeric conjugacy verdicts disagree (internal error)."""


class Uncertified(CurveGraphError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class TangencyAmbiguity(CurveGraphError):
    pass


class BudgetExceeded(CurveGraphError):
    pass


class ExtensionNotFound(CurveGraphError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = list(partial or [])


class WindowTooSmall(CurveGraphError):
    pass


class NoCrossRatioGap(CurveGraphError):
    pass


class BudgetExhausted(CurveGraphError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NotAutomorphism(CurveGraphError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class PreconditionError(CurveGraphError, ValueError):
    """Input violates a documented precondition."""
