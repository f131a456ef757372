"""Density operators, partial traces, Schmidt decomposition and entropies.

Bipartitions always split a state into its leading ``k`` tensor factors
(subsystem A) and the remaining factors (subsystem B).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import NumericalError, hermitian_eigendecompose
from .states import StateVector, fourier_eigenstate

TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
ZERO_LAMBDA = 1e-12


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    subsystem_dims: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        dims = tuple(int(d) for d in self.subsystem_dims)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got {m.shape}")
        if int(np.prod(dims)) != m.shape[0]:
            raise ValueError(f"subsystem dims {dims} do not match dimension {m.shape[0]}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density operator is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density operator trace is {tr!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending spectrum; raises if any eigenvalue is below -1e-10."""
        w = hermitian_eigendecompose(self.matrix).eigenvalues
        if w[0] < -PSD_TOL:
            raise NumericalError(f"density operator not positive semidefinite (min eigenvalue {w[0]:.3e})")
        return w


def density_operator(psi: StateVector) -> DensityOperator:
    """|psi><psi|."""
    a = psi.amplitudes
    if abs(np.vdot(a, a).real - 1.0) > TRACE_TOL:
        raise ValueError("density_operator requires a normalized state")
    return DensityOperator(np.outer(a, a.conj()), psi.dims)


def _split(dims: tuple[int, ...], num_a: int) -> tuple[int, int]:
    if not 1 <= num_a < len(dims):
        raise ValueError(f"subsystem A must hold 1..{len(dims) - 1} factors, got {num_a}")
    return int(np.prod(dims[:num_a])), int(np.prod(dims[num_a:]))


def partial_trace(rho: DensityOperator, num_qubits_A: int, side: str = "keep_A") -> DensityOperator:
    """Reduced density operator of the kept side.

    A is the leading ``num_qubits_A`` factors of ``rho.subsystem_dims``.
    """
    da, db = _split(rho.subsystem_dims, num_qubits_A)
    r = rho.matrix.reshape(da, db, da, db)
    if side == "keep_A":
        return DensityOperator(np.einsum("ajbj->ab", r), rho.subsystem_dims[:num_qubits_A])
    if side == "keep_B":
        return DensityOperator(np.einsum("iaib->ab", r), rho.subsystem_dims[num_qubits_A:])
    raise ValueError(f"side must be 'keep_A' or 'keep_B', got {side!r}")


def coefficient_matrix(psi: StateVector, num_qubits_A: int) -> np.ndarray:
    """psi as a dim_A x dim_B matrix alpha[i, k] = <i_A k_B|psi>."""
    da, db = _split(psi.dims, num_qubits_A)
    return psi.amplitudes.reshape(da, db)


def reduced_density(psi: StateVector, num_qubits_A: int, side: str = "keep_A") -> DensityOperator:
    """Same as partial_trace(density_operator(psi), ...) without forming the full projector."""
    alpha = coefficient_matrix(psi, num_qubits_A)
    if side == "keep_A":
        return DensityOperator(alpha @ alpha.conj().T, psi.dims[:num_qubits_A])
    if side == "keep_B":
        return DensityOperator(alpha.T @ alpha.conj(), psi.dims[num_qubits_A:])
    raise ValueError(f"side must be 'keep_A' or 'keep_B', got {side!r}")


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """psi = sum_j coefficients[j] |a_j>|b_j>, coefficients descending.

    ``a_vectors`` and ``b_vectors`` hold the factors as rows.
    ``b_unnormalized`` are the B-side vectors before division by sqrt(lambda_j);
    their Gram matrix is diag(lambda). ``degenerate`` is set when two non-zero
    lambdas coincide, in which case the factor bases are fixed only up to a
    unitary mixing inside the degenerate block.
    """

    coefficients: np.ndarray
    a_vectors: np.ndarray
    b_vectors: np.ndarray
    b_unnormalized: np.ndarray
    dims_a: tuple[int, ...]
    dims_b: tuple[int, ...]
    degenerate: bool

    @property
    def lambdas(self) -> np.ndarray:
        return self.coefficients**2

    def reconstruct(self) -> np.ndarray:
        return np.einsum("j,ja,jb->ab", self.coefficients, self.a_vectors, self.b_vectors).reshape(-1)

    def b_state(self, j: int) -> StateVector:
        basis = "computational" if all(d == 2 for d in self.dims_b) else "composite"
        return StateVector(self.b_vectors[j], self.dims_b, basis)


def schmidt_decompose(psi: StateVector, num_qubits_A: int) -> SchmidtDecomposition:
    """Schmidt expansion from the eigenbasis of rho_A.

    Each B-side vector is the projection (<a_j| x 1)|psi>, normalized by the
    square root of its eigenvalue. Directions with lambda <= 1e-12 are dropped.
    """
    if abs(psi.norm() - 1.0) > 1e-12:
        raise ValueError("schmidt_decompose requires a normalized state")
    alpha = coefficient_matrix(psi, num_qubits_A)
    eig = hermitian_eigendecompose(alpha @ alpha.conj().T)
    w = eig.eigenvalues[::-1]
    vecs = eig.eigenvectors[:, ::-1]
    keep = w > ZERO_LAMBDA
    w, vecs = w[keep], vecs[:, keep]
    a_rows = vecs.T.copy()
    b_tilde = vecs.conj().T @ alpha
    b_rows = b_tilde / np.sqrt(w)[:, None]
    degenerate = bool(np.any(np.abs(np.diff(w)) <= 1e-8 * max(w[0], 1.0))) if len(w) > 1 else False
    return SchmidtDecomposition(
        coefficients=np.sqrt(w),
        a_vectors=a_rows,
        b_vectors=b_rows,
        b_unnormalized=b_tilde,
        dims_a=psi.dims[:num_qubits_A],
        dims_b=psi.dims[num_qubits_A:],
        degenerate=degenerate,
    )


def shannon_bits(probs) -> float:
    """-sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho: DensityOperator) -> float:
    w = rho.eigenvalues()
    return shannon_bits(np.clip(w, 0.0, None))


def entanglement_entropy(psi: StateVector, num_qubits_A: int, tol: float = 1e-10) -> float:
    """Entropy of entanglement in bits; S(rho_A) and S(rho_B) must agree within tol."""
    s_a = von_neumann_entropy(reduced_density(psi, num_qubits_A, "keep_A"))
    s_b = von_neumann_entropy(reduced_density(psi, num_qubits_A, "keep_B"))
    if abs(s_a - s_b) > tol:
        raise NumericalError(f"S(rho_A) = {s_a!r} differs from S(rho_B) = {s_b!r}")
    return s_a


@dataclass(frozen=True)
class CascadeStep:
    split: str
    lambdas: tuple[float, ...]
    entropy: float


def _cascade_split_label(first: int, total: int) -> str:
    return f"q{first}|" + "".join(f"q{i}" for i in range(first + 1, total + 1))


def entropy_cascade(l: int, two_n: int = 4) -> list[CascadeStep]:
    """Peel off the leading qubit repeatedly and record the entanglement entropy.

    After each split the next state is the normalized B-side Schmidt vector
    paired with |0> on the peeled qubit (the branch that still carries the
    excitation somewhere on the remaining qubits).
    """
    psi = fourier_eigenstate(two_n, l)
    steps = []
    for first in range(1, two_n):
        sd = schmidt_decompose(psi, 1)
        steps.append(CascadeStep(
            split=_cascade_split_label(first, two_n),
            lambdas=tuple(float(x) for x in sd.lambdas),
            entropy=entanglement_entropy(psi, 1),
        ))
        if first == two_n - 1:
            break
        branch = [j for j in range(len(sd.coefficients)) if abs(sd.a_vectors[j][0]) > 1 - 1e-9]
        if len(branch) != 1:
            raise NumericalError("Schmidt basis of the peeled qubit is not the computational basis")
        psi = sd.b_state(branch[0])
    return steps
