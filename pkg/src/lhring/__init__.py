"""Exchange-operator model of a closed qubit ring, its entanglement structure,
and its Jaynes-Cummings coupling to a single field mode."""

from .entanglement import (
    DensityOperator,
    SchmidtDecomposition,
    density_operator,
    entanglement_entropy,
    entropy_cascade,
    partial_trace,
    schmidt_decompose,
)
from .jc import (
    DressedState,
    JCParams,
    TruncationError,
    dressed_state,
    jc_entropy,
    jc_hamiltonian,
    rabi_evolution,
    rabi_frequency,
)
from .linalg import (
    ConvergenceError,
    EigenSystem,
    HermitianOperator,
    NumericalError,
    evolve,
    hermitian_eigendecompose,
)
from .ring import (
    RingConstants,
    RingParams,
    exchange_operator,
    exciton_energy,
    extra_level_locator,
    lattice_spectrum,
    ring_constants,
    ring_hamiltonian,
    verify_eigenstate,
)
from .states import (
    StateVector,
    basis_state,
    fourier_eigenstate,
    inner_product,
    single_excitation_state,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DensityOperator",
    "DressedState",
    "EigenSystem",
    "HermitianOperator",
    "JCParams",
    "NumericalError",
    "RingConstants",
    "RingParams",
    "SchmidtDecomposition",
    "StateVector",
    "TruncationError",
    "basis_state",
    "density_operator",
    "dressed_state",
    "entanglement_entropy",
    "entropy_cascade",
    "evolve",
    "exchange_operator",
    "exciton_energy",
    "extra_level_locator",
    "fourier_eigenstate",
    "hermitian_eigendecompose",
    "inner_product",
    "jc_entropy",
    "jc_hamiltonian",
    "lattice_spectrum",
    "partial_trace",
    "rabi_evolution",
    "rabi_frequency",
    "ring_constants",
    "ring_hamiltonian",
    "schmidt_decompose",
    "single_excitation_state",
    "verify_eigenstate",
]
