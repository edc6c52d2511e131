"""Exception types shared across the package."""


class HypothesisNotMetError(ValueError):
    """A stated hypothesis of a bound is violated (e.g. n**(1 - alpha) > 2)."""


class QuadratureNonConvergedError(RuntimeError):
    """An adaptive integration ran out of subdivisions before meeting tolerance."""


class FlaggedApproximantError(RuntimeError):
    """A grid approximant failed residual validation during iteration."""

    def __init__(self, message: str, stage: int):
        super().__init__(message)
        self.stage = stage
