"""Exit criteria of the build, one test per criterion at its stated tolerance."""
import math
import time

import numpy as np

from lhring.entanglement import (
    entanglement_entropy,
    entropy_cascade,
    reduced_density,
    schmidt_decompose,
    von_neumann_entropy,
)
from lhring.jc import (
    JCParams,
    dressed_beta,
    dressed_state,
    excitation_number,
    fit_oscillation_frequency,
    jc_entropy,
    jc_hamiltonian,
    population_frequency,
    rabi_evolution,
)
from lhring.linalg import commutator_norm, hermitian_eigendecompose, random_hermitian
from lhring.ring import (
    RingParams,
    exchange_operator,
    extra_level_locator,
    hamming_weights,
    lattice_spectrum,
    level_gap,
    ring_constants,
    ring_hamiltonian,
    single_excitation_indices,
    verify_eigenstate,
)
from lhring.states import fourier_eigenstate, qubit_state

V0_422 = 422.0 / (2.0 * (1.0 - math.cos(math.pi / 8)))
PARAMS = RingParams(E0=0.0, V0=V0_422, N=8, two_n=4)


def test_criterion_01_eigenstate_identity(criterion):
    start = time.perf_counter()
    c = ring_constants(PARAMS)
    h = ring_hamiltonian(4, c)
    energies = dict(lattice_spectrum(4, c))
    expected = {2: c.e, 1: c.e + 2 * c.v, -1: c.e + 2 * c.v, 0: c.e + 4 * c.v}
    assert all(abs(energies[l] - expected[l]) <= 1e-9 for l in expected)
    worst = max(verify_eigenstate(h, fourier_eigenstate(4, l), expected[l]) for l in (-1, 0, 1, 2))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    criterion("1 eigenstate identity", ok, f"max residual {worst:.2e} (<= 1e-12), {elapsed:.3f}s (< 1s)")
    assert ok


def test_criterion_02_spectrum_oracle(criterion):
    start = time.perf_counter()
    c = ring_constants(PARAMS)
    worst = 0.0
    for two_n in range(2, 13, 2):
        num = hermitian_eigendecompose(ring_hamiltonian(two_n, c, "single_excitation")).eigenvalues
        ref = np.sort([e for _, e in lattice_spectrum(two_n, c)])
        worst = max(worst, float(np.max(np.abs(num - ref))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5.0
    criterion("2 spectrum oracle two_n=2..12", ok, f"max |dE| {worst:.2e} (<= 1e-10), {elapsed:.3f}s (< 5s)")
    assert ok


def test_criterion_03_full_space_sectors(criterion):
    c = ring_constants(PARAMS)
    h = ring_hamiltonian(4, c).matrix
    w = hamming_weights(4)
    cross = h[w[:, None] != w[None, :]]
    exact_zero = bool(np.all(cross == 0))
    idx = single_excitation_indices(4)
    block = h[np.ix_(idx, idx)]
    num = hermitian_eigendecompose(block).eigenvalues
    ref = np.array([c.e, c.e + 2 * c.v, c.e + 2 * c.v, c.e + 4 * c.v])
    dev = float(np.max(np.abs(num - ref)))
    ok = exact_zero and dev <= 1e-10
    criterion("3 full-space sectors", ok, f"cross-sector max {np.max(np.abs(cross)):.1e} (== 0), block spectrum dev {dev:.2e} (<= 1e-10)")
    assert ok


def test_criterion_04_gap(criterion):
    gap = level_gap(PARAMS)
    levels = dict(lattice_spectrum(4, ring_constants(PARAMS)))
    spacing = [levels[1] - levels[2], levels[0] - levels[1]]
    dev = max(abs(gap - 422.0), *(abs(s - 422.0) for s in spacing))
    ok = dev <= 1e-6
    criterion("4 level gap 422 cm^-1", ok, f"gap {gap:.9f}, max dev {dev:.2e} (<= 1e-6)")
    assert ok


def test_criterion_05_entanglement_cascade(criterion):
    start = time.perf_counter()
    ref = np.array([2 - 0.75 * math.log2(3), math.log2(3) - 2 / 3, 1.0])
    ref_lambdas = [[0.75, 0.25], [2 / 3, 1 / 3], [0.5, 0.5]]
    ent_dev = lam_dev = 0.0
    increasing = True
    rows = []
    for l in (-1, 0, 1, 2):
        steps = entropy_cascade(l)
        s = np.array([x.entropy for x in steps])
        rows.append(s)
        ent_dev = max(ent_dev, float(np.max(np.abs(s - ref))))
        increasing &= bool(np.all(np.diff(s) > 0))
        for step, lam in zip(steps, ref_lambdas):
            lam_dev = max(lam_dev, float(np.max(np.abs(np.array(step.lambdas) - lam))))
    identical = all(np.max(np.abs(r - rows[0])) <= 1e-9 for r in rows)
    elapsed = time.perf_counter() - start
    ok = ent_dev <= 1e-9 and lam_dev <= 1e-12 and increasing and identical and elapsed < 1.0
    criterion(
        "5 entanglement cascade", ok,
        f"S = ({', '.join(f'{x:.6f}' for x in rows[0])}), dev {ent_dev:.1e} (<= 1e-9), "
        f"lambda dev {lam_dev:.1e} (<= 1e-12), increasing={increasing}, same for all l={identical}, {elapsed:.3f}s",
    )
    assert ok


def test_criterion_06_extra_level(criterion):
    x = extra_level_locator(PARAMS)
    target = 1 - 2 * math.cos(math.pi / 8)
    scan = [n for n in range(-7, 9) if abs(math.cos(n * math.pi / 8) - target) <= 1e-9]
    ok = (not scan and not x.integer_solutions and abs(x.continuous_index - 6.57) <= 0.05
          and 6 < x.continuous_index < 7)
    criterion("6 extra level", ok, f"n = {x.continuous_index:.4f} (6.57 +- 0.05), integer solutions {list(x.integer_solutions)}")
    assert ok


def test_criterion_07_jc_oracle(criterion):
    start = time.perf_counter()
    e_dev = s_dev = comm = 0.0
    for delta in (0.0, 0.5, 1.0, 3.0):
        for g in (0.5, 1.0, 2.0):
            p = JCParams(nu=1.0, delta=delta, g=g, n_max=32)
            h = jc_hamiltonian(p)
            comm = max(comm, commutator_norm(h, excitation_number(p)))
            es = hermitian_eigendecompose(h)
            for n in range(31):
                for sign in ("plus", "minus"):
                    ds = dressed_state(p, n, sign)
                    k = int(np.argmin(np.abs(es.eigenvalues - ds.energy)))
                    e_dev = max(e_dev, abs(es.eigenvalues[k] - ds.energy))
                    grp = next(gr for gr in es.degeneracy_groups if k in gr)
                    psi = ds.state.amplitudes
                    s_dev = max(s_dev, float(np.linalg.norm(es.projector(grp) @ psi - psi)))
    elapsed = time.perf_counter() - start
    ok = e_dev <= 1e-9 and s_dev <= 1e-9 and comm <= 1e-12 and elapsed < 10.0
    criterion(
        "7 JC oracle equivalence", ok,
        f"energy dev {e_dev:.1e}, state dev {s_dev:.1e} (<= 1e-9), ||[H,N]|| {comm:.1e} (<= 1e-12), {elapsed:.2f}s (< 10s)",
    )
    assert ok


def test_criterion_08a_jc_entropy_resonant(criterion):
    p = JCParams(nu=1.0, delta=0.0, g=1.0, n_max=32)
    closed_dev = route_dev = 0.0
    for n in range(31):
        for sign in ("plus", "minus"):
            s = jc_entropy(p, n, sign, cross_check=False)
            schmidt = entanglement_entropy(dressed_state(p, n, sign).state, 1)
            closed_dev = max(closed_dev, abs(s - 1.0), abs(schmidt - 1.0))
            route_dev = max(route_dev, abs(s - schmidt))
    ok = closed_dev <= 1e-12 and route_dev <= 1e-10
    criterion("8a JC entropy at resonance", ok, f"|S - 1| {closed_dev:.1e} (<= 1e-12), routes differ {route_dev:.1e} (<= 1e-10)")
    assert ok


def test_criterion_08b_beta_large_n(criterion):
    beta = dressed_beta(JCParams(delta=3.0, g=1.0), 10_000, "plus")
    dev = abs(beta - 1.0)
    ok = dev <= 1e-2
    criterion("8b beta_10000(delta=3, g=1) near 1", ok, f"beta = {beta:.6f}, |beta - 1| = {dev:.4f} (<= 1e-2)")
    assert ok


def test_criterion_09_rabi_dynamics(criterion):
    start = time.perf_counter()
    freq_dev = transfer_gap = drift = 0.0
    for delta in (0.0, 1.0):
        for g in (0.5, 1.0, 2.0):
            p = JCParams(nu=1.0, delta=delta, g=g, n_max=8)
            es = hermitian_eigendecompose(jc_hamiltonian(p))
            for n in (0, 1, 3):
                w = population_frequency(p, n)
                t = np.linspace(0, 10 * 2 * math.pi / w, 4001)
                series = rabi_evolution(p, n, t, eig=es)
                fit = fit_oscillation_frequency(t, series.p_excited)
                freq_dev = max(freq_dev, abs(fit - w) / w)
                drift = max(drift, series.norm_drift)
                if delta == 0.0:
                    tt = math.pi / (2 * g * math.sqrt(n + 1))
                    p1 = rabi_evolution(p, n, [tt], eig=es).p_excited[0]
                    transfer_gap = max(transfer_gap, 1.0 - p1)
    elapsed = time.perf_counter() - start
    ok = freq_dev <= 1e-3 and transfer_gap <= 1e-8 and drift <= 1e-10 and elapsed < 10.0
    criterion(
        "9 Rabi dynamics", ok,
        f"freq rel dev {freq_dev:.1e} (<= 1e-3), 1 - P1 {transfer_gap:.1e} (<= 1e-8), "
        f"norm drift {drift:.1e} (<= 1e-10), {elapsed:.2f}s (< 10s)",
    )
    assert ok


def test_criterion_10_property_suites(criterion):
    perm_ok = True
    for two_n in (2, 4, 6):
        eye = np.eye(1 << two_n)
        for k in range(two_n):
            m = exchange_operator(two_n, k).matrix
            perm_ok &= bool(
                np.array_equal(m, m.conj().T) and np.array_equal(m @ m, eye)
                and set(np.unique(m)) <= {0, 1} and np.all(m.sum(0) == 1) and np.all(m.sum(1) == 1)
            )
    rng = np.random.default_rng(2007)
    fid_gap = sym = 0.0
    for _ in range(200):
        x = rng.normal(size=16) + 1j * rng.normal(size=16)
        psi = qubit_state(x / np.linalg.norm(x))
        for k in (1, 2, 3):
            sd = schmidt_decompose(psi, k)
            fid_gap = max(fid_gap, 1 - abs(np.vdot(psi.amplitudes, sd.reconstruct())) ** 2)
            s_a = von_neumann_entropy(reduced_density(psi, k, "keep_A"))
            s_b = von_neumann_entropy(reduced_density(psi, k, "keep_B"))
            sym = max(sym, abs(s_a - s_b))
    recon = 0.0
    for _ in range(100):
        dim = int(rng.integers(1, 65))
        m = random_hermitian(dim, rng)
        es = hermitian_eigendecompose(m)
        v, w = es.eigenvectors, es.eigenvalues
        recon = max(recon, float(np.linalg.norm(m.matrix - (v * w) @ v.conj().T)))
    ok = perm_ok and fid_gap <= 1e-10 and sym <= 1e-9 and recon <= 1e-10
    criterion(
        "10 property suites", ok,
        f"exchange ops ok={perm_ok}, Schmidt 1 - fidelity {fid_gap:.1e} (<= 1e-10), "
        f"|S_A - S_B| {sym:.1e} (<= 1e-9), eigen reconstruction {recon:.1e} (<= 1e-10)",
    )
    assert ok
