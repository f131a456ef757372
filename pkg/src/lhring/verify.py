"""Invariant suites run by ``lhring verify``.

Each suite returns a :class:`SuiteResult` carrying the worst measured
residual and the tolerance it was held to.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import entanglement as ent
from . import jc
from . import ring
from . import states
from .linalg import (
    commutator_norm,
    evolve,
    hermitian_eigendecompose,
    random_hermitian,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class VerifyConfig:
    ring: ring.RingParams
    jc: jc.JCParams
    photon_n: int = 0
    perturb_v: float = 0.0
    seed: int = 20070226


def _result(name, measured, tol, detail=""):
    return SuiteResult(name, bool(measured <= tol), float(measured), float(tol), detail)


def _multi(name, checks: dict[str, tuple[float, float]]):
    """Several residuals, each held to its own tolerance; reports the worst ratio's residual."""
    failed = [k for k, (m, t) in checks.items() if not m <= t]
    key = failed[0] if failed else max(checks, key=lambda k: checks[k][0] / max(checks[k][1], 1e-300))
    m, t = checks[key]
    detail = " ".join(f"{k}={v[0]:.3e}" for k, v in checks.items())
    return SuiteResult(name, not failed, float(m), float(t), detail)


def _random_state(rng, dim):
    x = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return x / np.linalg.norm(x)


# linalg


def linalg_eigen_reconstruction(cfg, rng):
    recon = ortho = trace = 0.0
    for _ in range(30):
        dim = int(rng.integers(1, 65))
        m = random_hermitian(dim, rng)
        es = hermitian_eigendecompose(m)
        v, w = es.eigenvectors, es.eigenvalues
        recon = max(recon, np.linalg.norm(m.matrix - (v * w) @ v.conj().T))
        ortho = max(ortho, np.max(np.abs(v.conj().T @ v - np.eye(dim))))
        trace = max(trace, abs(np.trace(m.matrix).real - w.sum()))
    return _multi("linalg.eigen_reconstruction", {
        "reconstruction": (recon, 1e-10), "orthonormality": (ortho, 1e-10), "trace": (trace, 1e-9),
    })


def linalg_evolve_conservation(cfg, rng):
    drift = group = 0.0
    for _ in range(200):
        dim = int(rng.integers(1, 9))
        m = random_hermitian(dim, rng)
        es = hermitian_eigendecompose(m)
        psi = _random_state(rng, dim)
        t1, t2 = rng.uniform(-5, 5, size=2)
        a = evolve(m, psi, t1 + t2, eig=es)
        b = evolve(m, evolve(m, psi, t1, eig=es), t2, eig=es)
        drift = max(drift, abs(np.linalg.norm(a) - 1.0))
        group = max(group, np.linalg.norm(a - b))
    return _multi("linalg.evolve_conservation", {"norm": (drift, 1e-10), "composition": (group, 1e-9)})


# states


def states_fourier_orthogonality(cfg, rng):
    worst = 0.0
    for two_n in range(2, 13, 2):
        vecs = {l: states.fourier_eigenstate(two_n, l) for l in states.admissible_l(two_n)}
        for l1 in vecs:
            for l2 in vecs:
                if l1 != l2:
                    worst = max(worst, abs(states.inner_product(vecs[l1], vecs[l2])))
    return _result("states.fourier_orthogonality", worst, 1e-12)


def states_fourier_moduli(cfg, rng):
    worst = 0.0
    for two_n in range(2, 13, 2):
        for l in states.admissible_l(two_n):
            amps = states.fourier_eigenstate(two_n, l).amplitudes
            nz = np.abs(amps) > 1e-14
            if nz.sum() != two_n:
                return _result("states.fourier_moduli", math.inf, 1e-12, f"two_n={two_n} l={l}")
            worst = max(worst, np.max(np.abs(np.abs(amps[nz]) - 1 / math.sqrt(two_n))))
    return _result("states.fourier_moduli", worst, 1e-12)


def states_basis_roundtrip(cfg, rng):
    bad = 0
    for nq in range(1, 9):
        for idx in range(1 << nq):
            bits = states.index_to_bits(idx, nq)
            s = states.basis_state(bits)
            if int(np.argmax(np.abs(s.amplitudes))) != idx or states.bits_to_index(bits) != idx:
                bad += 1
    return _result("states.basis_roundtrip", bad, 0)


# ring


def _constants(cfg):
    c = ring.ring_constants(cfg.ring)
    return c, ring.RingConstants(c.e, c.v + cfg.perturb_v)


def ring_exchange_operators(cfg, rng):
    worst = 0.0
    for two_n in (2, 4, 6):
        eye = np.eye(1 << two_n)
        for k in range(two_n):
            p = ring.exchange_operator(two_n, k).matrix
            perm_ok = np.all((p == 0) | (p == 1)) and np.all(p.sum(0) == 1) and np.all(p.sum(1) == 1)
            worst = max(
                worst,
                np.max(np.abs(p - p.conj().T)),
                np.max(np.abs(p @ p - eye)),
                0.0 if perm_ok else 1.0,
            )
    return _result("ring.exchange_operators", worst, 0.0)


def ring_sector_preservation(cfg, rng):
    _, c = _constants(cfg)
    two_n = 4
    h = ring.ring_hamiltonian(two_n, c).matrix
    w = ring.hamming_weights(two_n)
    leak = np.max(np.abs(h[w[:, None] != w[None, :]]))
    return _result("ring.sector_preservation", leak, 0.0)


def ring_block_consistency(cfg, rng):
    _, c = _constants(cfg)
    worst = 0.0
    for two_n in (2, 4, 6, 8):
        full = ring.ring_hamiltonian(two_n, c).matrix
        idx = ring.single_excitation_indices(two_n)
        block = ring.ring_hamiltonian(two_n, c, "single_excitation").matrix
        worst = max(worst, np.max(np.abs(full[np.ix_(idx, idx)] - block)))
    return _result("ring.block_consistency", worst, 1e-12)


def ring_spectrum_oracle(cfg, rng):
    c, ch = _constants(cfg)
    worst = 0.0
    for two_n in range(2, 13, 2):
        num = hermitian_eigendecompose(ring.ring_hamiltonian(two_n, ch, "single_excitation")).eigenvalues
        ref = np.sort([e for _, e in ring.lattice_spectrum(two_n, c)])
        worst = max(worst, np.max(np.abs(num - ref)))
    return _result("ring.spectrum_oracle", worst, 1e-10)


def ring_degenerate_projector(cfg, rng):
    c, ch = _constants(cfg)
    es = hermitian_eigendecompose(ring.ring_hamiltonian(4, ch, "single_excitation"))
    try:
        grp = es.group_of(ring.lattice_energy(4, c, 1), atol=1e-9)
    except KeyError:
        return _result("ring.degenerate_projector", math.inf, 1e-9, "no eigenvalue at e+2v")
    num = es.projector(grp)
    ref = sum(np.outer(u, u.conj()) for u in (states.fourier_amplitudes(4, 1), states.fourier_amplitudes(4, -1)))
    return _result("ring.degenerate_projector", np.linalg.norm(num - ref), 1e-9)


def ring_translation_symmetry(cfg, rng):
    _, c = _constants(cfg)
    t = ring.cyclic_shift_operator(4)
    h = ring.ring_hamiltonian(4, c).matrix
    return _result("ring.translation_symmetry", np.max(np.abs(t @ h - h @ t)), 1e-12)


def ring_eigenstates(cfg, rng):
    c, ch = _constants(cfg)
    h = ring.ring_hamiltonian(4, ch)
    worst, detail = 0.0, []
    for l, e in ring.lattice_spectrum(4, c):
        r = ring.verify_eigenstate(h, states.fourier_eigenstate(4, l), e)
        detail.append(f"l={l}:{r:.3e}")
        worst = max(worst, r)
    return _result("ring.eigenstate_residuals", worst, 1e-12, " ".join(detail))


def ring_extra_level(cfg, rng):
    x = ring.extra_level_locator(cfg.ring)
    ok = not x.integer_solutions and x.lower_neighbor == 6 and x.upper_neighbor == 7 \
        if cfg.ring.N == 8 else not x.integer_solutions
    return _result("ring.extra_level", 0.0 if ok else 1.0, 0.0, f"n={x.continuous_index:.6f}")


# entanglement


def ent_random_symmetry(cfg, rng):
    worst = 0.0
    for _ in range(200):
        psi = states.qubit_state(_random_state(rng, 16))
        for k in (1, 2, 3):
            s_a = ent.von_neumann_entropy(ent.reduced_density(psi, k, "keep_A"))
            s_b = ent.von_neumann_entropy(ent.reduced_density(psi, k, "keep_B"))
            bound = min(k, 4 - k)
            worst = max(worst, abs(s_a - s_b), max(0.0, -s_a), max(0.0, s_a - bound))
    return _result("entanglement.entropy_symmetry", worst, 1e-9)


def ent_schmidt_reconstruction(cfg, rng):
    worst = 0.0
    for _ in range(200):
        psi = states.qubit_state(_random_state(rng, 16))
        k = int(rng.integers(1, 4))
        sd = ent.schmidt_decompose(psi, k)
        fid = abs(np.vdot(psi.amplitudes, sd.reconstruct())) ** 2
        worst = max(worst, 1.0 - fid, abs(sd.lambdas.sum() - 1.0))
    return _result("entanglement.schmidt_reconstruction", worst, 1e-10)


def ent_product_trace(cfg, rng):
    worst = 0.0
    for _ in range(50):
        ka = int(rng.integers(1, 4))
        a = states.qubit_state(_random_state(rng, 1 << ka))
        b = states.qubit_state(_random_state(rng, 1 << (4 - ka)))
        rho = ent.partial_trace(ent.density_operator(states.tensor(a, b)), ka)
        worst = max(worst, np.max(np.abs(rho.matrix - ent.density_operator(a).matrix)))
    return _result("entanglement.product_trace", worst, 1e-12)


def ent_b7_eigenvalues(cfg, rng):
    worst = 0.0
    for l in states.admissible_l(4):
        rho_a = ent.partial_trace(ent.density_operator(states.fourier_eigenstate(4, l)), 1)
        worst = max(worst, np.max(np.abs(rho_a.eigenvalues() - [0.25, 0.75])))
    return _result("entanglement.reduced_spectrum", worst, 1e-12)


def ent_b_orthogonality(cfg, rng):
    worst = 0.0
    for l in states.admissible_l(4):
        sd = ent.schmidt_decompose(states.fourier_eigenstate(4, l), 1)
        gram = sd.b_unnormalized.conj() @ sd.b_unnormalized.T
        worst = max(worst, np.max(np.abs(gram - np.diag(sd.lambdas))))
    return _result("entanglement.conditional_orthogonality", worst, 1e-10)


def ent_cascade(cfg, rng):
    ref = np.array([2 - 0.75 * math.log2(3), math.log2(3) - 2 / 3, 1.0])
    worst, increasing = 0.0, True
    for l in states.admissible_l(4):
        s = np.array([step.entropy for step in ent.entropy_cascade(l)])
        worst = max(worst, np.max(np.abs(s - ref)))
        increasing &= bool(np.all(np.diff(s) > 0))
    return _result("entanglement.cascade", worst if increasing else math.inf, 1e-9)


# jc


def jc_spectrum_oracle(cfg, rng):
    p = cfg.jc
    es = hermitian_eigendecompose(jc.jc_hamiltonian(p))
    worst = 0.0
    for n in range(p.n_max - 1):
        for sign in ("plus", "minus"):
            e = jc.dressed_energy(p, n, sign)
            worst = max(worst, np.min(np.abs(es.eigenvalues - e)))
    return _result("jc.spectrum_oracle", worst, 1e-9)


def jc_commutator(cfg, rng):
    worst = 0.0
    for _ in range(50):
        p = jc.JCParams(
            nu=float(rng.uniform(0.1, 3)), delta=float(rng.uniform(-2, 2)),
            g=float(rng.uniform(0, 2)), n_max=int(rng.integers(1, 20)),
        )
        worst = max(worst, commutator_norm(jc.jc_hamiltonian(p), jc.excitation_number(p)))
    return _result("jc.number_conservation", worst, 1e-12)


def jc_dressed_pairs(cfg, rng):
    p = cfg.jc
    if p.g == 0:
        return _result("jc.dressed_pairs", 0.0, 1e-10, "decoupled")
    overlap = product = 0.0
    for n in range(p.n_max):
        plus, minus = jc.dressed_state(p, n, "plus"), jc.dressed_state(p, n, "minus")
        overlap = max(overlap, abs(states.inner_product(plus.state, minus.state)))
        product = max(product, abs(plus.beta * minus.beta - 1.0))
    return _multi("jc.dressed_pairs", {"overlap": (overlap, 1e-12), "beta_product": (product, 1e-10)})


def jc_entropy_routes(cfg, rng):
    p = cfg.jc
    worst = 0.0
    for n in range(p.n_max):
        for sign in ("plus", "minus"):
            closed = jc.jc_entropy(p, n, sign, cross_check=False)
            schmidt = ent.entanglement_entropy(jc.dressed_state(p, n, sign).state, 1)
            worst = max(worst, abs(closed - schmidt))
    return _result("jc.entropy_routes", worst, 1e-10)


def jc_evolution_conservation(cfg, rng):
    p = cfg.jc
    n = cfg.photon_n
    omega = jc.population_frequency(p, n)
    t = np.linspace(0, 10 * 2 * math.pi / max(omega, 1e-12), 2001)
    series = jc.rabi_evolution(p, n, t)
    return _result("jc.evolution_conservation", max(series.norm_drift, series.number_drift), 1e-10)


def jc_population_frequency(cfg, rng):
    worst = 0.0
    for delta in (0.0, 1.0):
        for g in (0.5, 1.0, 2.0):
            p = jc.JCParams(nu=cfg.jc.nu, delta=delta, g=g, n_max=8)
            es = hermitian_eigendecompose(jc.jc_hamiltonian(p))
            for n in (0, 1, 3):
                w = jc.population_frequency(p, n)
                t = np.linspace(0, 10 * 2 * math.pi / w, 4001)
                series = jc.rabi_evolution(p, n, t, eig=es)
                fit = jc.fit_oscillation_frequency(t, series.p_excited)
                worst = max(worst, abs(fit - w) / w)
    return _result("jc.population_frequency", worst, 1e-3)


SUITES: list[Callable] = [
    linalg_eigen_reconstruction,
    linalg_evolve_conservation,
    states_fourier_orthogonality,
    states_fourier_moduli,
    states_basis_roundtrip,
    ring_exchange_operators,
    ring_sector_preservation,
    ring_block_consistency,
    ring_spectrum_oracle,
    ring_degenerate_projector,
    ring_translation_symmetry,
    ring_eigenstates,
    ring_extra_level,
    ent_random_symmetry,
    ent_schmidt_reconstruction,
    ent_product_trace,
    ent_b7_eigenvalues,
    ent_b_orthogonality,
    ent_cascade,
    jc_spectrum_oracle,
    jc_commutator,
    jc_dressed_pairs,
    jc_entropy_routes,
    jc_evolution_conservation,
    jc_population_frequency,
]


def run_suites(cfg: VerifyConfig) -> list[SuiteResult]:
    results = []
    for suite in SUITES:
        rng = np.random.default_rng(cfg.seed)
        start = time.perf_counter()
        try:
            res = suite(cfg, rng)
        except Exception as exc:  # a crashing suite is a failing suite
            res = SuiteResult(suite.__name__, False, math.inf, 0.0, f"{type(exc).__name__}: {exc}")
        res.seconds = round(time.perf_counter() - start, 3)
        results.append(res)
    return results


def report(results: list[SuiteResult]) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "suites": [asdict(r) for r in results],
    }
