"""Exception types shared across the package."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class GridMismatchError(ContractError):
    """Fields living on different grids were combined."""


class SingularOperatorError(ContractError):
    """A negative bracket power hit a nonzero k = 0 mode at m = 0."""


class BlowUpError(RuntimeError):
    """Time stepping produced a non-finite value."""

    def __init__(self, step: int, time: float):
        super().__init__(f"non-finite state after step {step} (t = {time:.6g})")
        self.step = step
        self.time = time


class ConfigError(ValueError):
    """A study configuration failed validation."""
