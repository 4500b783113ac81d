"""Exception hierarchy shared by the simulator and the harness."""


class DpssError(Exception):
    """Base class for every error raised by this package."""


class UavIndexError(DpssError, IndexError):
    """A UAV index outside ``0..N-1`` was supplied."""


class SimulationFault(DpssError, AssertionError):
    """An internal invariant of the event engine or stepper was broken.

    Raised instead of clamping or skipping, so engine bugs surface loudly.
    """


class FuelExhausted(DpssError):
    """The step budget ran out before the requested time was consumed."""

    def __init__(self, fuel, remaining):
        super().__init__(f"step budget of {fuel} iterations exhausted with {remaining} time left")
        self.fuel = fuel
        self.remaining = remaining


class ScenarioError(DpssError, ValueError):
    """A scenario document failed validation.

    ``kind`` names the first violated rule, e.g. ``"ordering"`` or ``"rational-format"``.
    """

    def __init__(self, kind, message):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
