"""Exception types shared across the simulator."""


class AtomDiodeError(Exception):
    """Base class for all simulator errors."""


class ValidationError(AtomDiodeError):
    """A parameter or configuration field failed validation."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NyquistViolation(AtomDiodeError):
    """Momentum content of the requested state exceeds the grid's Nyquist
    band; raise n_points (or shrink the velocity)."""


class DomainTooSmall(AtomDiodeError):
    """Initial packet does not fit inside the spatial domain."""


class EmptyPhotonSector(AtomDiodeError):
    """A quantum jump was requested on a state with no photon-1 amplitude;
    indicates a logic error in the jump draw."""


class NonConvergence(AtomDiodeError):
    """Matrix exponential routine failed to converge."""
