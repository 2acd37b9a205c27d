"""Exception hierarchy shared by all modules."""


class GapcertError(Exception):
    """Base class for every error raised by gapcert."""


class DimensionError(GapcertError, ValueError):
    """Operands live on different numbers of qubits."""


class ResourceError(GapcertError):
    """A configured size cap would be exceeded."""


class DomainError(GapcertError, ValueError):
    """Input outside the mathematical domain of an operation."""


class InputError(GapcertError, ValueError):
    """Malformed external input (JSON Hamiltonians, SDPA files)."""


class RelationError(GapcertError):
    """A generated Lie relation does not map to zero."""


class DegreeError(GapcertError, ValueError):
    """A pseudo-state was asked for a moment beyond its locality cap."""


class SolverError(GapcertError):
    """The SDP solver failed to produce a usable solution."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class VerificationError(GapcertError):
    """A numerical or exact verification suite failed."""
