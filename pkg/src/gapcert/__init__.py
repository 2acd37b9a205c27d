"""Certified lower bounds on the spectral gap of qubit Hamiltonians."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegreeError,
    DimensionError,
    DomainError,
    GapcertError,
    InputError,
    RelationError,
    ResourceError,
    SolverError,
    VerificationError,
)
from .pauli import PauliPoly, PauliString, hamiltonian_from_json, load_hamiltonian  # noqa: E402
from .report import BoundReport  # noqa: E402
from .lower_bound import solve_lower  # noqa: E402
from .upper_bounds import eeb_upper, lasserre_upper  # noqa: E402
from .certifier import GapCertificate, certify_gap  # noqa: E402

__all__ = [
    "__version__",
    "PauliPoly",
    "PauliString",
    "hamiltonian_from_json",
    "load_hamiltonian",
    "BoundReport",
    "solve_lower",
    "lasserre_upper",
    "eeb_upper",
    "GapCertificate",
    "certify_gap",
    "GapcertError",
    "DimensionError",
    "DomainError",
    "InputError",
    "DegreeError",
    "RelationError",
    "ResourceError",
    "SolverError",
    "VerificationError",
]
