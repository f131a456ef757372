"""Jaynes-Cummings coupling of the two-level ring to a single field mode.

H = nu (a^+ a + Z/2) + delta Z + g (a^+ s_- + a s_+), with hbar = 1.
The composite basis is photon-major: index 2*n + s for |n photons, s>, where
s = 1 is the excited lattice level (Z = +1) and s = 0 the ground level.

The excitation number a^+ a + Z/2 is conserved, so H is block diagonal in
pairs {|n,1>, |n+1,0>} plus the lone ground state |0,0>. Inside a pair the
energies are nu(n + 1/2) +- sqrt(delta^2 + g^2 (n+1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from .entanglement import entanglement_entropy, shannon_bits
from .linalg import EigenSystem, HermitianOperator, NumericalError, hermitian_eigendecompose
from .states import StateVector

LEAK_TOL = 1e-10
DEFAULT_N_MAX = 32


class TruncationError(NumericalError):
    """Population reached the highest retained Fock level."""


@dataclass(frozen=True)
class JCParams:
    nu: float = 1.0
    delta: float = 0.0
    g: float = 1.0
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        for name in ("nu", "delta", "g"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


def detuning_from_frequencies(nu0: float, nu: float) -> float:
    """delta = pi (nu0 - nu); nu0 is the lattice two-level transition frequency."""
    return math.pi * (nu0 - nu)


def jc_index(photons: int, s: int) -> int:
    return 2 * photons + s


def jc_labels(n_max: int) -> tuple[str, ...]:
    return tuple(f"{n},{s}" for n in range(n_max + 1) for s in (0, 1))


def _field_ops(n_max: int):
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    eye_f = np.eye(n_max + 1)
    eye_q = np.eye(2)
    z = np.diag([-1.0, 1.0])
    s_plus = np.array([[0.0, 0.0], [1.0, 0.0]])  # |1><0|
    return a, eye_f, eye_q, z, s_plus


def excitation_number(p: JCParams) -> HermitianOperator:
    """a^+ a + Z/2."""
    a, eye_f, eye_q, z, _ = _field_ops(p.n_max)
    n_op = np.kron(a.T @ a, eye_q) + 0.5 * np.kron(eye_f, z)
    return HermitianOperator(n_op.astype(np.complex128), jc_labels(p.n_max))


def jc_hamiltonian(p: JCParams) -> HermitianOperator:
    a, eye_f, eye_q, z, s_plus = _field_ops(p.n_max)
    number = np.kron(a.T @ a, eye_q) + 0.5 * np.kron(eye_f, z)
    hop = np.kron(a.T, s_plus.T) + np.kron(a, s_plus)
    h = p.nu * number + p.delta * np.kron(eye_f, z) + p.g * hop
    return HermitianOperator(h.astype(np.complex128), jc_labels(p.n_max))


def rabi_frequency(p: JCParams, n: int) -> float:
    """sqrt(delta^2 + g^2 (n+1)); half the dressed splitting of the n-th pair."""
    if n < 0:
        raise ValueError(f"photon index must be >= 0, got {n}")
    return math.sqrt(p.delta**2 + p.g**2 * (n + 1))


def population_frequency(p: JCParams, n: int) -> float:
    """Angular frequency of the excited-state population, 2 sqrt(delta^2 + g^2 (n+1))."""
    return 2.0 * rabi_frequency(p, n)


def _sign(sign: str) -> int:
    if sign in ("plus", "+"):
        return 1
    if sign in ("minus", "-"):
        return -1
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def dressed_beta(p: JCParams, n: int, sign: str) -> float:
    """Mixing ratio of |n+1,0> to |n,1> (beta_n for plus, beta-bar_n for minus).

    Evaluated in whichever algebraically equivalent form avoids cancellation;
    beta_n * beta-bar_n = 1. Requires g > 0.
    """
    sg = _sign(sign)
    if p.g == 0:
        raise ValueError("mixing ratio undefined for g = 0")
    if n < 0:
        raise ValueError(f"photon index must be >= 0, got {n}")
    omega = rabi_frequency(p, n)
    gs = p.g * math.sqrt(n + 1)
    # plus: (omega - delta)/gs ; minus: (omega + delta)/gs
    d = -sg * p.delta
    if d >= 0:
        return (omega + d) / gs
    return gs / (omega - d)


def dressed_energy(p: JCParams, n: int, sign: str) -> float:
    return p.nu * (n + 0.5) + _sign(sign) * rabi_frequency(p, n)


@dataclass(frozen=True, eq=False)
class DressedState:
    n: int
    sign: str
    beta: float
    state: StateVector
    energy: float
    decoupled: bool = False

    @property
    def excited_weight(self) -> float:
        """Weight of |n,1>, i.e. p = 1/(1 + beta^2)."""
        return float(abs(self.state.amplitudes[jc_index(self.n, 1)]) ** 2)


def dressed_state(p: JCParams, n: int, sign: str) -> DressedState:
    """Closed-form eigenstate of the n-th excitation pair.

    For g = 0 the bare states are returned: plus -> |n,1> with energy
    nu(n+1/2) + delta, minus -> |n+1,0> with nu(n+1/2) - delta, and the
    result is flagged ``decoupled``.
    """
    sg = _sign(sign)
    sign = "plus" if sg > 0 else "minus"
    if not 0 <= n <= p.n_max - 1:
        raise ValueError(f"photon index n={n} outside 0..{p.n_max - 1} for n_max={p.n_max}")
    amps = np.zeros(p.dim, dtype=np.complex128)
    up, down = jc_index(n, 1), jc_index(n + 1, 0)
    if p.g == 0:
        amps[up if sg > 0 else down] = 1.0
        state = StateVector(amps, (p.n_max + 1, 2), "composite")
        beta = 0.0 if sg > 0 else math.inf
        energy = p.nu * (n + 0.5) + sg * p.delta
        return DressedState(n, sign, beta, state, energy, decoupled=True)
    beta = dressed_beta(p, n, sign)
    norm = math.sqrt(1.0 + beta * beta)
    amps[up] = 1.0 / norm
    amps[down] = sg * beta / norm
    state = StateVector(amps, (p.n_max + 1, 2), "composite")
    return DressedState(n, sign, beta, state, dressed_energy(p, n, sign))


def binary_entropy(prob: float) -> float:
    return shannon_bits([prob, 1.0 - prob])


def jc_entropy(p: JCParams, n: int, sign: str, cross_check: bool = True, tol: float = 1e-10) -> float:
    """Field/lattice entanglement of a dressed state, -p log2 p - (1-p) log2(1-p).

    p = 1/(1 + beta^2). With ``cross_check`` the value is compared with the
    Schmidt-route entropy of the same state under the field | lattice split.
    """
    ds = dressed_state(p, n, sign)
    if ds.decoupled:
        s = 0.0
    else:
        s = binary_entropy(1.0 / (1.0 + ds.beta**2))
    if cross_check:
        s_schmidt = entanglement_entropy(ds.state, 1)
        if abs(s - s_schmidt) > tol:
            raise NumericalError(f"closed-form entropy {s!r} disagrees with Schmidt route {s_schmidt!r}")
    return s


@dataclass(frozen=True, eq=False)
class RabiSeries:
    t: np.ndarray
    p_excited: np.ndarray
    norm_drift: float
    number_drift: float
    top_fock_population: float


def rabi_evolution(p: JCParams, n: int, t_grid, eig: EigenSystem | None = None) -> RabiSeries:
    """Excited-lattice population |<n,1|psi(t)>|^2 starting from |n+1,0>.

    The full truncated Hamiltonian is propagated through its eigendecomposition.
    Raises TruncationError if the top Fock level ever holds more than 1e-10.
    """
    if n < 0 or n + 1 > p.n_max:
        raise ValueError(f"initial state |{n + 1},0> not representable with n_max={p.n_max}")
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if not np.all(np.isfinite(t)):
        raise ValueError("time grid must be finite")
    h = jc_hamiltonian(p)
    if eig is None:
        eig = hermitian_eigendecompose(h)
    psi0 = np.zeros(p.dim, dtype=np.complex128)
    psi0[jc_index(n + 1, 0)] = 1.0
    v = eig.eigenvectors
    coeffs = v.conj().T @ psi0
    psi_t = v @ (np.exp(-1j * np.outer(eig.eigenvalues, t)) * coeffs[:, None])

    probs = np.abs(psi_t) ** 2
    top = float(probs[[jc_index(p.n_max, 0), jc_index(p.n_max, 1)], :].sum(axis=0).max())
    if top > LEAK_TOL:
        raise TruncationError(
            f"population {top:.3e} reached the top Fock level n_max={p.n_max}; increase n_max"
        )
    number = excitation_number(p).matrix.diagonal().real
    n_expect = number @ probs
    return RabiSeries(
        t=t,
        p_excited=probs[jc_index(n, 1)],
        norm_drift=float(np.max(np.abs(probs.sum(axis=0) - 1.0))),
        number_drift=float(np.max(np.abs(n_expect - (n + 0.5)))),
        top_fock_population=top,
    )


def rabi_population_closed_form(p: JCParams, n: int, t) -> np.ndarray:
    """g^2(n+1)/Omega^2 * sin^2(Omega t) with Omega = sqrt(delta^2 + g^2(n+1))."""
    omega = rabi_frequency(p, n)
    if omega == 0:
        return np.zeros_like(np.asarray(t, dtype=float))
    amp = p.g**2 * (n + 1) / omega**2
    return amp * np.sin(omega * np.asarray(t, dtype=float)) ** 2


def fit_oscillation_frequency(t, y) -> float:
    """Angular frequency of a sampled sinusoid, by least squares.

    The starting guess is the interpolated peak of the zero-padded spectrum.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    dt = t[1] - t[0]
    yc = y - y.mean()
    pad = 16 * len(y)
    power = np.abs(np.fft.rfft(yc, n=pad))
    k = int(np.argmax(power[1:])) + 1
    w0 = 2 * math.pi * np.fft.rfftfreq(pad, dt)[k]

    def model(tt, w, c0, c1, c2):
        return c0 + c1 * np.cos(w * tt) + c2 * np.sin(w * tt)

    popt, _ = curve_fit(model, t, y, p0=[w0, y.mean(), 0.0, 0.0])
    return float(abs(popt[0]))
