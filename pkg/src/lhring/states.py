"""Multi-qubit basis states and the Fourier eigenstates of the ring.

Qubit 0 is the leftmost ket symbol and the most significant bit of the
basis index, so ``|1000>`` is index 8 of a 16-vector.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .linalg import as_complex

NORM_TOL = 1e-12

BitString = Union[str, Sequence[int]]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over a tensor-product basis.

    ``dims`` lists the local dimensions of the factors, leftmost first.
    ``basis`` is ``"computational"`` for pure qubit registers and
    ``"composite"`` for mixed spaces such as Fock x two-level.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    basis: str = "computational"
    normalized: bool = True

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if int(np.prod(dims, dtype=np.int64)) != amps.size:
            raise ValueError(f"amplitude length {amps.size} does not match dims {dims}")
        if self.basis not in ("computational", "composite"):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        if self.basis == "computational" and any(d != 2 for d in dims):
            raise ValueError("computational basis requires qubit factors")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state contains NaN or Inf amplitudes")
        if self.normalized:
            nrm = float(np.vdot(amps, amps).real)
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized (norm^2 = {nrm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def num_qubits(self) -> int:
        return sum(1 for d in self.dims if d == 2) if self.basis == "composite" else len(self.dims)

    def with_amplitudes(self, amps) -> "StateVector":
        return StateVector(amps, self.dims, self.basis, self.normalized)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        return f"StateVector(dims={self.dims}, basis={self.basis!r}, {ket_string(self)})"


def qubit_state(amplitudes, normalized: bool = True) -> StateVector:
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    n = amps.size.bit_length() - 1
    if amps.size != 1 << n:
        raise ValueError(f"length {amps.size} is not a power of two")
    return StateVector(amps, (2,) * n, normalized=normalized)


def parse_bits(bits: BitString) -> tuple[int, ...]:
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits.strip("|>")]
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"bit string must contain only 0 and 1, got {bits!r}")
    return out


def bits_to_index(bits: BitString) -> int:
    idx = 0
    for b in parse_bits(bits):
        idx = (idx << 1) | b
    return idx


def index_to_bits(index: int, num_qubits: int) -> tuple[int, ...]:
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"index {index} out of range for {num_qubits} qubits")
    return tuple((index >> (num_qubits - 1 - i)) & 1 for i in range(num_qubits))


def basis_state(bits: BitString) -> StateVector:
    """|q0 q1 ... q_{2n-1}> with q0 the most significant bit."""
    b = parse_bits(bits)
    amps = np.zeros(1 << len(b), dtype=np.complex128)
    amps[bits_to_index(b)] = 1.0
    return StateVector(amps, (2,) * len(b))


def single_excitation_index(two_n: int, m: int) -> int:
    """Basis index of the string with a single 1 at position m, i.e. 2**(two_n-1-m)."""
    if two_n < 1:
        raise ValueError("two_n must be positive")
    if not 0 <= m < two_n:
        raise ValueError(f"excitation position m={m} outside 0..{two_n - 1}")
    return 1 << (two_n - 1 - m)


def single_excitation_state(two_n: int, m: int) -> StateVector:
    amps = np.zeros(1 << two_n, dtype=np.complex128)
    amps[single_excitation_index(two_n, m)] = 1.0
    return StateVector(amps, (2,) * two_n)


def admissible_l(two_n: int) -> range:
    """Phase labels l = -n+1, ..., n of a closed loop of two_n sites."""
    if two_n < 2 or two_n % 2:
        raise ValueError(f"two_n must be even and >= 2, got {two_n}")
    n = two_n // 2
    return range(-n + 1, n + 1)


def phase_angle(two_n: int, l: int) -> float:
    """delta_l = l*pi/n."""
    if l not in admissible_l(two_n):
        raise ValueError(
            f"l={l} outside the admissible window {list(admissible_l(two_n))} for two_n={two_n}"
        )
    return l * math.pi / (two_n // 2)


def fourier_amplitudes(two_n: int, l: int) -> np.ndarray:
    """Normalized amplitudes e^{i m delta_l}/sqrt(2n), m = 0..2n-1, in excitation-position order."""
    delta = phase_angle(two_n, l)
    m = np.arange(two_n)
    return np.exp(1j * m * delta) / math.sqrt(two_n)


def fourier_eigenstate(two_n: int, l: int) -> StateVector:
    """Single-excitation plane wave with phase step delta_l = l*pi/n."""
    coeffs = fourier_amplitudes(two_n, l)
    amps = np.zeros(1 << two_n, dtype=np.complex128)
    for m, c in enumerate(coeffs):
        amps[single_excitation_index(two_n, m)] = c
    return StateVector(amps, (2,) * two_n)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return as_complex(np.vdot(a.amplitudes, b.amplitudes))


def tensor(*states: StateVector) -> StateVector:
    amps = np.array([1.0 + 0j])
    dims: tuple[int, ...] = ()
    for s in states:
        amps = np.kron(amps, s.amplitudes)
        dims += s.dims
    basis = "computational" if all(s.basis == "computational" for s in states) else "composite"
    return StateVector(amps, dims, basis)


def _fmt_amp(z: complex) -> str:
    r, phi = abs(z), cmath.phase(z)
    if abs(phi) < 1e-12:
        return f"{r:.4g}"
    return f"{r:.4g}e^{{i{phi:.4g}}}"


def ket_string(state: StateVector, cutoff: float = 1e-12) -> str:
    """Human-readable expansion, e.g. ``0.5|1000> + 0.5e^{i1.571}|0100>``."""
    terms = []
    for idx in np.flatnonzero(np.abs(state.amplitudes) > cutoff):
        digits = np.unravel_index(idx, state.dims)
        label = "".join(str(int(d)) for d in digits) if state.basis == "computational" \
            else ",".join(str(int(d)) for d in digits)
        terms.append(f"{_fmt_amp(state.amplitudes[idx])}|{label}>")
    return " + ".join(terms) if terms else "0"
