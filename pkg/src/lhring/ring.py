"""Exchange-operator Hamiltonian of a closed loop of qubits.

H = e + v * sum_k P(k, k+1), where P swaps qubits k and k+1 (mod 2n). The
constants e and v are fixed by matching the two lowest optically relevant
exciton energies of an N-site aggregate, E0 + 2 V0 cos(n pi / N).
Energies are plain floats in cm^-1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import HermitianOperator
from .states import StateVector, admissible_l, index_to_bits, single_excitation_index

MAX_FULL_QUBITS = 12  # 2**12 = 4096


@dataclass(frozen=True)
class RingParams:
    """E0: single-site excitation energy, V0: neighbour coupling (cm^-1).

    N bounds the exciton index (8 for the modeled ring); two_n is the number
    of qubits in the loop (4 for the modeled ring). The two are unrelated.
    """

    E0: float
    V0: float
    N: int = 8
    two_n: int = 4

    def __post_init__(self):
        if not (math.isfinite(self.E0) and math.isfinite(self.V0)):
            raise ValueError("E0 and V0 must be finite")
        # V0 = 0 is kept as the decoupled limit
        if self.V0 < 0:
            raise ValueError(f"V0 must be non-negative, got {self.V0}")
        if self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if self.two_n < 2 or self.two_n % 2:
            raise ValueError(f"two_n must be even and >= 2, got {self.two_n}")


@dataclass(frozen=True)
class RingConstants:
    e: float
    v: float


def ring_constants(p: RingParams) -> RingConstants:
    """Choose e, v so that E_2 = E0 - 2V0 and E_{+-1} = E0 - 2V0 cos(pi/N)."""
    return RingConstants(e=p.E0 - 2.0 * p.V0, v=p.V0 * (1.0 - math.cos(math.pi / p.N)))


def level_gap(p: RingParams) -> float:
    """Spacing 2 V0 (1 - cos(pi/N)) between successive lattice levels (two_n = 4)."""
    return 2.0 * ring_constants(p).v


def exciton_energy(p: RingParams, n: int) -> float:
    if not -p.N + 1 <= n <= p.N:
        raise ValueError(f"exciton index n={n} outside {-p.N + 1}..{p.N}")
    return p.E0 + 2.0 * p.V0 * math.cos(n * math.pi / p.N)


def exciton_spectrum(p: RingParams) -> list[tuple[int, float]]:
    return [(n, exciton_energy(p, n)) for n in range(-p.N + 1, p.N + 1)]


def _check_full(two_n: int) -> None:
    if two_n < 2:
        raise ValueError(f"two_n must be >= 2, got {two_n}")
    if two_n > MAX_FULL_QUBITS:
        raise ValueError(
            f"full representation limited to two_n <= {MAX_FULL_QUBITS} "
            f"(dimension 2**{MAX_FULL_QUBITS} = 4096); use single_excitation"
        )


def exchange_permutation(two_n: int, k: int) -> np.ndarray:
    """perm[i] = index of the basis state obtained by swapping bits k, k+1 of i."""
    if not 0 <= k < two_n:
        raise ValueError(f"k={k} outside 0..{two_n - 1}")
    j = (k + 1) % two_n
    idx = np.arange(1 << two_n)
    sk, sj = two_n - 1 - k, two_n - 1 - j
    bk = (idx >> sk) & 1
    bj = (idx >> sj) & 1
    flip = bk ^ bj
    return idx ^ ((flip << sk) | (flip << sj))


def _permutation_matrix(perm: np.ndarray) -> np.ndarray:
    m = np.zeros((perm.size, perm.size), dtype=np.complex128)
    m[perm, np.arange(perm.size)] = 1.0
    return m


def basis_labels(two_n: int) -> tuple[str, ...]:
    return tuple("".join(map(str, index_to_bits(i, two_n))) for i in range(1 << two_n))


def exchange_operator(two_n: int, k: int) -> HermitianOperator:
    """Permutation matrix of P(k, k+1 mod 2n) on the full 2**two_n space."""
    _check_full(two_n)
    return HermitianOperator(_permutation_matrix(exchange_permutation(two_n, k)), basis_labels(two_n))


def cyclic_shift_operator(two_n: int) -> np.ndarray:
    """Unitary moving the content of qubit m to qubit m+1 (mod 2n); not Hermitian."""
    _check_full(two_n)
    idx = np.arange(1 << two_n)
    low = idx & 1
    perm = (idx >> 1) | (low << (two_n - 1))
    return _permutation_matrix(perm)


def _single_excitation_block(two_n: int, c: RingConstants) -> np.ndarray:
    h = np.eye(two_n, dtype=np.complex128) * c.e
    for k in range(two_n):
        j = (k + 1) % two_n
        for m in range(two_n):
            target = j if m == k else k if m == j else m
            h[target, m] += c.v
    return h


def ring_hamiltonian(two_n: int, c: RingConstants, representation: str = "full") -> HermitianOperator:
    """Ring Hamiltonian on the full space or on the one-excitation sector.

    The single-excitation block is indexed by excitation position m = 0..2n-1
    (basis state |Bin(2**(2n-1-m))>); its diagonal is e + v(2n-2) and nearest
    neighbours on the loop are coupled by v.
    """
    if representation == "single_excitation":
        if two_n < 2:
            raise ValueError(f"two_n must be >= 2, got {two_n}")
        labels = tuple(basis_labels_single(two_n))
        return HermitianOperator(_single_excitation_block(two_n, c), labels)
    if representation != "full":
        raise ValueError(f"unknown representation {representation!r}")
    _check_full(two_n)
    dim = 1 << two_n
    h = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim)
    for k in range(two_n):
        np.add.at(h, (exchange_permutation(two_n, k), cols), c.v)
    h[cols, cols] += c.e
    return HermitianOperator(h, basis_labels(two_n))


def basis_labels_single(two_n: int) -> list[str]:
    return ["0" * m + "1" + "0" * (two_n - 1 - m) for m in range(two_n)]


def single_excitation_indices(two_n: int) -> np.ndarray:
    return np.array([single_excitation_index(two_n, m) for m in range(two_n)])


def hamming_weights(two_n: int) -> np.ndarray:
    idx = np.arange(1 << two_n)
    return np.array([bin(i).count("1") for i in idx])


def lattice_energy(two_n: int, c: RingConstants, l: int) -> float:
    n = two_n // 2
    return c.e + 2.0 * c.v * math.cos(l * math.pi / n) + c.v * (two_n - 2)


def lattice_spectrum(two_n: int, c: RingConstants) -> list[tuple[int, float]]:
    """(l, E_l) with E_l = e + 2v cos(l pi/n) + v(2n-2) for l = -n+1..n."""
    return [(l, lattice_energy(two_n, c, l)) for l in admissible_l(two_n)]


def verify_eigenstate(H: HermitianOperator, psi: StateVector, E: float) -> float:
    """||H psi - E psi||_2."""
    amps = np.asarray(getattr(psi, "amplitudes", psi))
    if amps.shape != (H.dim,):
        raise ValueError(f"dimension mismatch: operator {H.dim}, state {amps.shape}")
    return float(np.linalg.norm(H.matrix @ amps - E * amps))


@dataclass(frozen=True)
class ExtraLevel:
    """Where the top lattice level falls within the exciton band."""

    energy: float
    continuous_index: float
    integer_solutions: tuple[int, ...]
    lower_neighbor: int
    upper_neighbor: int
    offset_above_pair: float


def extra_level_locator(p: RingParams, atol: float = 1e-9) -> ExtraLevel:
    """Solve E0^H = E0 + 2 V0 cos(x pi/N) for real x in [0, N].

    E0^H = e + 4v is the highest level of the four-qubit ring. The relation
    reduces to cos(x pi/N) = 1 - 2 cos(pi/N), independent of E0 and V0.
    The integer scan compares cosines, so it is also well defined for V0 = 0.
    """
    target = 1.0 - 2.0 * math.cos(math.pi / p.N)
    if abs(target) > 1.0:
        raise ValueError(f"no real solution for N={p.N}")
    c = ring_constants(p)
    top = lattice_energy(4, c, 0)
    pair = lattice_energy(4, c, 1)
    x = math.acos(target) * p.N / math.pi
    hits = tuple(
        n for n in range(-p.N + 1, p.N + 1) if abs(math.cos(n * math.pi / p.N) - target) <= atol
    )
    return ExtraLevel(
        energy=top,
        continuous_index=x,
        integer_solutions=hits,
        lower_neighbor=math.floor(x),
        upper_neighbor=math.ceil(x),
        offset_above_pair=top - pair,
    )
