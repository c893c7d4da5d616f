"""Exception types shared across the package."""


class CloudReserveError(Exception):
    """Base class for all package-specific errors."""


class TraceParseError(CloudReserveError, ValueError):
    """Malformed demand-trace input; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InfeasibleScheduleError(CloudReserveError, ValueError):
    """A schedule leaves demand uncovered; carries the first violating slot."""

    def __init__(self, slot: int, message: str | None = None):
        super().__init__(message or f"schedule infeasible at slot {slot}: demand exceeds "
                                    "on-demand launches plus active reservations")
        self.slot = slot


class IntractableInstanceError(CloudReserveError, RuntimeError):
    """An exact solve would exceed the configured search budget."""


class ReservationNeverJustifiedError(CloudReserveError, ValueError):
    """discount == 1 leaves no finite break-even spend, so reserving can never pay off."""


class ConfigError(CloudReserveError, ValueError):
    """Invalid experiment configuration."""
