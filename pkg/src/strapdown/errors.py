from __future__ import annotations


class DomainError(ValueError):
    """Argument outside the domain of a Chebyshev-basis operation."""


class FitError(ValueError):
    """Angular-velocity fit cannot be formed (degree too high, rank deficient)."""


class ConvergenceError(RuntimeError):
    """A Picard solve did not reach its DPC tolerance within the iteration cap."""

    def __init__(self, message: str, *, iterations: int, dpc: float, interval: int | None = None):
        self.iterations = iterations
        self.dpc = dpc
        self.interval = interval
        if interval is not None:
            message = f"interval {interval}: {message}"
        super().__init__(message)

    def at_interval(self, interval: int) -> ConvergenceError:
        return ConvergenceError(
            str(self), iterations=self.iterations, dpc=self.dpc, interval=interval
        )


class ConfigError(ValueError):
    """Invalid sweep configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
