import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from lhring.linalg import (
    ConvergenceError,
    HermitianOperator,
    NumericalError,
    degeneracy_groups,
    evolve,
    hermitian_eigendecompose,
    random_hermitian,
)
from lhring import linalg
from lhring.ring import RingConstants, ring_hamiltonian
from lhring.states import basis_state


def test_diagonal_input_sorted_and_permuted():
    es = hermitian_eigendecompose(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(es.eigenvalues, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(np.abs(es.eigenvectors), np.eye(3)[:, [1, 2, 0]])


def test_pauli_x():
    es = hermitian_eigendecompose([[0, 1], [1, 0]])
    np.testing.assert_allclose(es.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_ring_block_spectrum():
    # circulant with diagonal 2, neighbours 1: 2 + 2cos(l pi/2), l = -1, 0, 1, 2
    h = ring_hamiltonian(4, RingConstants(0.0, 1.0), "single_excitation")
    es = hermitian_eigendecompose(h)
    np.testing.assert_allclose(es.eigenvalues, [0.0, 2.0, 2.0, 4.0], atol=1e-12)
    assert es.degeneracy_groups == ((0,), (1, 2), (3,))


def test_complex_entries_against_lapack():
    rng = np.random.default_rng(7)
    m = random_hermitian(12, rng)
    es = hermitian_eigendecompose(m)
    np.testing.assert_allclose(es.eigenvalues, np.linalg.eigvalsh(m.matrix), atol=1e-12)


def test_phase_convention():
    rng = np.random.default_rng(3)
    es = hermitian_eigendecompose(random_hermitian(9, rng))
    for j in range(9):
        col = es.eigenvectors[:, j]
        k = int(np.argmax(np.abs(col)))
        assert abs(col[k].imag) < 1e-15 and col[k].real > 0


def test_phase_tie_broken_by_lowest_index():
    es = hermitian_eigendecompose([[0, 1j], [-1j, 0]])
    for j in range(2):
        assert es.eigenvectors[0, j].imag == 0 and es.eigenvectors[0, j].real > 0


def test_deterministic():
    rng = np.random.default_rng(11)
    m = random_hermitian(20, rng)
    a, b = hermitian_eigendecompose(m), hermitian_eigendecompose(m)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_zero_matrix():
    es = hermitian_eigendecompose(np.zeros((3, 3)))
    np.testing.assert_array_equal(es.eigenvalues, 0.0)
    assert es.degeneracy_groups == ((0, 1, 2),)


def test_rejects_nan_and_non_hermitian():
    with pytest.raises(ValueError):
        HermitianOperator(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(ValueError):
        HermitianOperator(np.array([[0, 1], [2, 0]]))
    with pytest.raises(ValueError):
        HermitianOperator(np.array([[1j, 0], [0, 0]]))


def test_non_convergence_reports_off_norm(monkeypatch):
    monkeypatch.setattr(linalg, "MAX_SWEEPS", 1)
    rng = np.random.default_rng(0)
    with pytest.raises(ConvergenceError) as info:
        hermitian_eigendecompose(random_hermitian(10, rng))
    assert info.value.off_norm > 0
    assert isinstance(info.value, NumericalError)


def test_degeneracy_grouping_relative():
    w = np.array([0.0, 1.0, 1.0 + 1e-10, 2.0])
    assert degeneracy_groups(w) == ((0,), (1, 2), (3,))
    assert degeneracy_groups(np.array([5.0])) == ((0,),)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 64), seed=st.integers(0, 2**32 - 1))
def test_random_hermitian_properties(dim, seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(dim, rng)
    es = hermitian_eigendecompose(m)
    v, w = es.eigenvectors, es.eigenvalues
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(m.matrix - (v * w) @ v.conj().T) <= 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10
    assert np.max(np.linalg.norm(m.matrix @ v - v * w, axis=0)) <= 1e-10
    assert abs(np.trace(m.matrix).real - w.sum()) <= 1e-9


# evolve


def test_evolve_zero_time_identity():
    rng = np.random.default_rng(1)
    m = random_hermitian(5, rng)
    psi = rng.normal(size=5) + 1j * rng.normal(size=5)
    psi /= np.linalg.norm(psi)
    np.testing.assert_allclose(evolve(m, psi, 0.0), psi, atol=1e-13)


def test_evolve_stationary_phase():
    e = np.array([0.3, -1.2, 2.5])
    psi = np.array([0, 1, 0], dtype=complex)
    np.testing.assert_allclose(evolve(np.diag(e), psi, 1.7), np.exp(-1j * -1.2 * 1.7) * psi, atol=1e-14)


def test_evolve_returns_state_vector():
    s = basis_state("01")
    out = evolve(np.eye(4), s, 0.5)
    assert out.dims == (2, 2)
    np.testing.assert_allclose(out.amplitudes, np.exp(-0.5j) * s.amplitudes)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_evolve_two_level_rabi_transfer(n):
    # resonant block [[0, g sqrt(n+1)], [g sqrt(n+1), 0]] on (|n,1>, |n+1,0>)
    gs = math.sqrt(n + 1)
    block = np.array([[0, gs], [gs, 0]])
    out = evolve(block, np.array([0, 1], dtype=complex), math.pi / (2 * gs))
    assert abs(out[0]) ** 2 >= 1 - 1e-8


def test_evolve_matches_expm():
    rng = np.random.default_rng(5)
    m = random_hermitian(6, rng)
    psi = np.eye(6)[0].astype(complex)
    np.testing.assert_allclose(evolve(m, psi, 0.8), scipy.linalg.expm(-0.8j * m.matrix) @ psi, atol=1e-12)


def test_evolve_dimension_mismatch():
    with pytest.raises(ValueError):
        evolve(np.eye(3), np.ones(2) / math.sqrt(2), 1.0)


def test_evolve_norm_and_composition():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        dim = int(rng.integers(1, 9))
        m = random_hermitian(dim, rng)
        es = hermitian_eigendecompose(m)
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        t1, t2 = rng.uniform(-10, 10, size=2)
        a = evolve(m, psi, t1 + t2, eig=es)
        assert abs(np.linalg.norm(a) - 1) <= 1e-10
        b = evolve(m, evolve(m, psi, t1, eig=es), t2, eig=es)
        assert np.linalg.norm(a - b) <= 1e-9
