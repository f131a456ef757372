"""Dense complex linear algebra kernel.

Hermitian operators, a cyclic Jacobi eigensolver for complex Hermitian
matrices and unitary time evolution built on top of it. Amplitudes are
plain numpy ``complex128`` arrays; scalars are Python ``complex``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 50
DEGENERACY_RTOL = 1e-8


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its stated accuracy."""


class ConvergenceError(NumericalError):
    def __init__(self, off_norm: float, sweeps: int):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )
        self.off_norm = off_norm
        self.sweeps = sweeps


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def as_complex(z) -> complex:
    """Convert to ``complex`` rejecting NaN or infinite parts."""
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"non-finite complex scalar {z!r}")
    return z


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense complex Hermitian matrix with optional basis labels."""

    matrix: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator contains NaN or Inf entries")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3e})")
        if self.labels is not None and len(self.labels) != m.shape[0]:
            raise ValueError("number of labels does not match dimension")
        object.__setattr__(self, "matrix", _frozen(m))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        return self.matrix @ np.asarray(getattr(other, "amplitudes", other))


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues, eigenvectors as columns, degeneracy groups."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_groups: tuple[tuple[int, ...], ...]
    sweeps: int = 0
    off_norm: float = 0.0

    def projector(self, group: Sequence[int]) -> np.ndarray:
        """Orthogonal projector onto the span of the given eigenvector columns."""
        v = self.eigenvectors[:, list(group)]
        return v @ v.conj().T

    def group_of(self, energy: float, atol: float = 1e-9) -> tuple[int, ...]:
        """Degeneracy group whose eigenvalue lies within ``atol`` of ``energy``."""
        for grp in self.degeneracy_groups:
            if abs(self.eigenvalues[grp[0]] - energy) <= atol:
                return grp
        raise KeyError(f"no eigenvalue within {atol} of {energy}")


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament ordering: every (p, q) pair once per sweep, disjoint within a round."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0)
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    """Annihilate a[p, q] for each disjoint pair in place."""
    b = a[p, q]
    absb = np.abs(b)
    active = absb > 0.0
    if not np.any(active):
        return
    p, q, b, absb = p[active], q[active], b[active], absb[active]
    app = a[p, p].real
    aqq = a[q, q].real
    phase = b / absb
    theta = (aqq - app) / (2.0 * absb)
    big = np.abs(theta) > 1e150
    t = np.where(
        big,
        0.5 / np.where(big, theta, 1.0),
        np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)),
    )
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # U restricted to (p, q) = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    w = phase.conj()
    for m in (a, v):
        cp, cq = m[:, p], m[:, q]
        m[:, p] = cp * c - cq * (s * w)
        m[:, q] = cp * s + cq * (c * w)
    rp, rq = a[p, :], a[q, :]
    a[p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
    a[q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
    a[p, q] = 0.0
    a[q, p] = 0.0


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    out = v.copy()
    for j in range(v.shape[1]):
        col = mags[:, j]
        k = int(np.flatnonzero(col >= col.max() * (1.0 - 1e-12) - 1e-15)[0])
        out[:, j] *= np.conj(v[k, j]) / abs(v[k, j])
    return out


def degeneracy_groups(eigenvalues: np.ndarray, rtol: float = DEGENERACY_RTOL) -> tuple[tuple[int, ...], ...]:
    """Chain ascending eigenvalues whose neighbours differ by at most rtol * range."""
    if len(eigenvalues) == 0:
        return ()
    spread = float(eigenvalues[-1] - eigenvalues[0])
    tol = rtol * spread
    groups = [[0]]
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return tuple(tuple(g) for g in groups)


def hermitian_eigendecompose(M, tol: float = 1e-10) -> EigenSystem:
    """Full spectral decomposition of a Hermitian operator by cyclic Jacobi.

    Pairs are visited in a fixed round-robin order, so identical input yields
    identical output. Each eigenvector is rotated so that its largest-magnitude
    component (lowest index on ties) is real and positive.

    Raises ConvergenceError if the off-diagonal Frobenius norm is still above
    ``1e-13 * ||M||_F`` after 50 sweeps, and NumericalError if the
    reconstruction ``||M - V diag(w) V^H||_F`` exceeds ``tol * ||M||_F``.
    """
    if not isinstance(M, HermitianOperator):
        M = HermitianOperator(np.asarray(M))
    m0 = M.matrix
    n = M.dim
    a = np.array(m0, dtype=np.complex128)
    np.fill_diagonal(a, a.diagonal().real)
    v = np.eye(n, dtype=np.complex128)
    norm = float(np.linalg.norm(m0))
    target = OFF_DIAGONAL_TOL * norm

    sweeps = 0
    off = _off_norm(a)
    while off > target:
        if sweeps >= MAX_SWEEPS:
            raise ConvergenceError(off, sweeps)
        for p, q in _round_robin(n):
            _rotate(a, v, p, q)
        np.fill_diagonal(a, a.diagonal().real)
        sweeps += 1
        off = _off_norm(a)

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = _fix_phase(v[:, order])

    resid = float(np.linalg.norm(m0 - (v * w) @ v.conj().T))
    bound = tol * norm if norm > 0 else tol
    if resid > bound:
        raise NumericalError(f"eigen-reconstruction residual {resid:.3e} exceeds {bound:.3e}")

    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(w, v, degeneracy_groups(w), sweeps=sweeps, off_norm=off)


def evolve(M, psi0, t: float, eig: EigenSystem | None = None):
    """Return exp(-i M t) psi0 via the eigendecomposition of M.

    ``psi0`` may be a StateVector (a StateVector is returned) or an array.
    A precomputed ``eig`` of M may be passed to evolve many times cheaply.
    """
    if not isinstance(M, HermitianOperator):
        M = HermitianOperator(np.asarray(M))
    amps = np.asarray(getattr(psi0, "amplitudes", psi0), dtype=np.complex128)
    if amps.shape != (M.dim,):
        raise ValueError(f"dimension mismatch: operator {M.dim}, state {amps.shape}")
    if not np.isfinite(t):
        raise ValueError("evolution time must be finite")
    if eig is None:
        eig = hermitian_eigendecompose(M)
    v = eig.eigenvectors
    out = v @ (np.exp(-1j * eig.eigenvalues * t) * (v.conj().T @ amps))
    if hasattr(psi0, "with_amplitudes"):
        return psi0.with_amplitudes(out)
    return out


def commutator_norm(a, b) -> float:
    """Frobenius norm of [A, B]."""
    a = np.asarray(getattr(a, "matrix", a))
    b = np.asarray(getattr(b, "matrix", b))
    return float(np.linalg.norm(a @ b - b @ a))


def random_hermitian(dim: int, rng: np.random.Generator) -> HermitianOperator:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((x + x.conj().T) / 2)
