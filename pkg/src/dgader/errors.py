"""Exception types raised by the solver."""


class DGError(Exception):
    """Base class for solver errors."""


class ConfigError(DGError, ValueError):
    """Invalid run configuration."""


class InadmissibleStateError(DGError):
    """A state left the admissible set where the scheme requires it.

    Carries optional location context (``element``, ``face``, ``stage``)
    so the driver can report where the failure happened.
    """

    def __init__(self, message, *, element=None, face=None, state=None,
                 stage=None):
        super().__init__(message)
        self.element = element
        self.face = face
        self.state = state
        self.stage = stage

    def __str__(self):
        msg = super().__str__()
        ctx = []
        if self.stage is not None:
            ctx.append(f"stage={self.stage}")
        if self.element is not None:
            ctx.append(f"element={self.element}")
        if self.face is not None:
            ctx.append(f"face={self.face}")
        if self.state is not None:
            ctx.append(f"state={list(map(float, self.state))}")
        return msg + (f" ({', '.join(ctx)})" if ctx else "")


class PicardConvergenceError(DGError):
    """The space-time predictor fixed-point iteration did not converge."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = list(residuals)
