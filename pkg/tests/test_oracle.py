"""Brute-force Lindblad integration on a truncated Fock space."""

import numpy as np
import pytest

from dispersive_jcm import analytic, oracle
from dispersive_jcm.model import AtomicAmplitudes, ModelParams

P111 = ModelParams(1.0, 1.0, 1.0)
BALANCED = AtomicAmplitudes.symmetric()


# ---------------------------------------------------------------- construction

def test_fock_truncation_frozen_values():
    assert oracle.fock_truncation(P111) == 40
    assert oracle.fock_truncation(ModelParams(1.0, 0.2, 0.2)) == 40
    assert oracle.fock_truncation(ModelParams(1.0, 5.0, 5.0)) == 40
    assert oracle.fock_truncation(ModelParams(1.0, 0.2, 0.1)) == 29
    assert oracle.fock_truncation(ModelParams(1.0, 0.2, 0.4)) == 68


def test_coherent_state_vector_is_normalized_eigenvector():
    alpha = 0.7 - 1.1j
    n = 50
    v = oracle.coherent_state_vector(alpha, n)
    assert np.isclose(np.linalg.norm(v), 1.0, atol=1e-12)
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    # lowering-operator eigenrelation holds away from the truncation edge
    assert np.allclose((a @ v)[:40], (alpha * v)[:40], atol=1e-12)


def test_coherent_state_vector_at_zero_is_vacuum():
    v = oracle.coherent_state_vector(0.0, 8)
    assert v[0] == 1.0 and np.all(v[1:] == 0.0)


def test_initial_state_is_a_valid_pure_product():
    rho0 = oracle.initial_state(P111, BALANCED)
    assert rho0.n_fock == 41  # truncation index 40 -> 41 levels
    assert rho0.time == 0.0
    rho0.validate()
    obs = oracle.observables(rho0)
    assert np.isclose(obs["purity"], 1.0, atol=1e-12)
    assert np.isclose(obs["nbar"], 1.0, atol=1e-12)  # |  -iF/k |^2 = 1
    assert np.isclose(obs["coherence_magnitude"], 0.5, atol=1e-12)


def test_density_matrix_validate_rejects_defects():
    n = 2
    good = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    oracle.FockDensityMatrix(n, good).validate()
    with pytest.raises(ValueError):
        oracle.FockDensityMatrix(n, np.eye(6, dtype=complex) / 6).validate()  # shape
    bad_h = good.copy()
    bad_h[0, 1] = 1j
    with pytest.raises(ValueError):
        oracle.FockDensityMatrix(n, bad_h).validate()  # not Hermitian
    with pytest.raises(ValueError):
        oracle.FockDensityMatrix(n, np.diag([0.6, 0.6, 0.0, 0.0]).astype(complex)).validate()
    with pytest.raises(ValueError):
        oracle.FockDensityMatrix(n, np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)).validate()
    with pytest.raises(ValueError):
        # positive weight on the last Fock level: truncation inadequate
        oracle.FockDensityMatrix(n, np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)).validate()


def test_integrator_config_rejects_nonpositive_tolerances():
    with pytest.raises(ValueError):
        oracle.IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        oracle.IntegratorConfig(abs_tol=-1e-9)
    with pytest.raises(ValueError):
        oracle.IntegratorConfig(max_step=0.0)


# ---------------------------------------------------------------- evolution

def test_evolve_matches_dense_closed_form():
    rho0 = oracle.initial_state(P111, BALANCED)
    final = oracle.evolve(P111, rho0, 0.6)
    assert final.time == 0.6
    ref = oracle.analytic_state_dense(P111, BALANCED, 0.6, final.n_fock)
    assert oracle.trace_distance(final.data, ref) < 1e-8


def test_evolve_excited_atom_keeps_field_coherent():
    amps = AtomicAmplitudes(1.0, 0.0)
    rho0 = oracle.initial_state(P111, amps)
    final = oracle.evolve(P111, rho0, 1.5)
    ref = oracle.analytic_state_dense(P111, amps, 1.5, final.n_fock)
    assert oracle.trace_distance(final.data, ref) < 1e-8
    # reduced field is the conditioned coherent state
    fld = oracle.partial_trace_atom(final.data)
    u = analytic.coherent_pair(P111, 1.5).beta_e_prime
    vec = oracle.coherent_state_vector(u, final.n_fock)
    assert 1.0 - float(np.real(vec.conj() @ fld @ vec)) < 1e-6


def test_evolve_at_start_time_returns_copy():
    rho0 = oracle.initial_state(P111, BALANCED)
    same = oracle.evolve(P111, rho0, 0.0)
    assert same.data is not rho0.data
    assert np.array_equal(same.data, rho0.data)
    with pytest.raises(ValueError):
        oracle.evolve(P111, rho0, -1.0)


def test_trajectory_emits_requested_times_in_one_pass():
    rho0 = oracle.initial_state(P111, BALANCED)
    times = [0.0, 0.2, 0.4]
    out = list(oracle.evolve_trajectory(P111, rho0, times))
    assert [t for t, _ in out] == times
    assert np.array_equal(out[0][1], rho0.data)
    ref = oracle.analytic_state_dense(P111, BALANCED, 0.4, rho0.n_fock)
    assert oracle.trace_distance(out[-1][1], ref) < 1e-8


def test_trajectory_validates_time_ordering():
    rho0 = oracle.initial_state(P111, BALANCED)
    with pytest.raises(ValueError):
        list(oracle.evolve_trajectory(P111, rho0, [-0.5, 1.0]))
    with pytest.raises(ValueError):
        list(oracle.evolve_trajectory(P111, rho0, [1.0, 0.5]))


def test_stationary_dense_state_is_a_generator_fixed_point():
    n = 40
    stat = oracle.stationary_state_dense(P111, BALANCED, n)
    gen = oracle.build_generator(P111, n)
    assert float(np.max(np.abs(gen(stat)))) < 1e-10


# ---------------------------------------------------------------- measurement

def test_partial_traces_of_the_initial_product_state():
    rho0 = oracle.initial_state(P111, BALANCED)
    atom = oracle.partial_trace_field(rho0)
    assert np.allclose(atom, 0.5 * np.ones((2, 2)), atol=1e-12)
    fld = oracle.partial_trace_atom(rho0)
    v = oracle.coherent_state_vector(-1j, rho0.n_fock)
    assert np.allclose(fld, np.outer(v, v.conj()), atol=1e-12)
    assert np.isclose(np.trace(fld).real, 1.0, atol=1e-12)


def test_trace_distance_of_orthogonal_pure_states():
    a = np.diag([1.0, 0.0]).astype(complex)
    b = np.diag([0.0, 1.0]).astype(complex)
    assert np.isclose(oracle.trace_distance(a, b), 1.0, atol=1e-14)
    assert oracle.trace_distance(a, a) == 0.0


def test_embedding_flags_the_degenerate_start():
    rho0 = oracle.initial_state(P111, BALANCED)
    pair = analytic.coherent_pair(P111, 0.0)
    emb = oracle.embed_two_qubit(rho0, pair.beta_e_prime, pair.beta_g_prime)
    assert emb.degenerate
    assert abs(emb.leakage) < 1e-10
    assert np.isclose(np.trace(emb.matrix).real, 1.0, atol=1e-12)


def test_embedded_concurrence_matches_closed_form():
    t = 0.6
    rho0 = oracle.initial_state(P111, BALANCED)
    final = oracle.evolve(P111, rho0, t)
    pair = analytic.coherent_pair(P111, t)
    emb = oracle.embed_two_qubit(final, pair.beta_e_prime, pair.beta_g_prime)
    assert not emb.degenerate
    assert abs(emb.leakage) < 1e-6
    c_num = oracle.wootters_concurrence(emb.matrix)
    assert np.isclose(c_num, analytic.concurrence(P111, t), atol=1e-6)


def test_wootters_concurrence_frozen_cases():
    bell = 0.5 * np.array(
        [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]], complex
    )
    assert np.isclose(oracle.wootters_concurrence(bell), 1.0, atol=1e-12)
    assert oracle.wootters_concurrence(np.diag([1.0, 0, 0, 0]).astype(complex)) == 0.0
    p = 0.8
    werner = p * bell + (1 - p) * np.eye(4) / 4
    # max(0, (3p - 1)/2) for this family
    assert np.isclose(oracle.wootters_concurrence(werner), 0.7, atol=1e-12)


def test_wootters_concurrence_rejects_bad_input():
    with pytest.raises(ValueError):
        oracle.wootters_concurrence(np.eye(3, dtype=complex) / 3)
    with pytest.raises(ValueError):
        oracle.wootters_concurrence(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex))


def test_observables_track_the_evolved_state():
    t = 0.6
    rho0 = oracle.initial_state(P111, BALANCED)
    final = oracle.evolve(P111, rho0, t)
    obs = oracle.observables(final)
    assert np.isclose(obs["linear_entropy"], analytic.zeta_global(P111, t), atol=1e-8)
    assert np.isclose(obs["nbar"], analytic.mean_photon_number(P111, t), atol=1e-8)
    re_phi = float(np.real(analytic._phi(P111, t)))
    assert np.isclose(2.0 * obs["coherence_magnitude"], np.exp(re_phi), atol=1e-8)
