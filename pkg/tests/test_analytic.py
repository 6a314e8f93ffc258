"""Closed-form solution: amplitudes, dephasing exponent, observables."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersive_jcm import analytic
from dispersive_jcm.model import AtomicAmplitudes, ModelParams

P111 = ModelParams(1.0, 1.0, 1.0)
P_SUB = ModelParams(1.0, 0.2, 0.2)
P_SUP = ModelParams(1.0, 5.0, 5.0)

params_st = st.builds(
    ModelParams,
    st.floats(0.05, 5.0),
    st.floats(0.05, 5.0),
    st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
)
times_st = st.floats(0.0, 20.0)


# ---------------------------------------------------------------- amplitudes

def test_conditioned_amplitudes_start_at_stationary_offset():
    pair = analytic.coherent_pair(P_SUB, 0.0)
    assert pair.beta_e == 0.0 and pair.beta_g == 0.0
    assert np.isclose(pair.beta_e_prime, -1j)  # -i F / k = -i 0.2/0.2
    assert pair.beta_e_prime == pair.beta_g_prime
    assert pair.dist_sq == 0.0


def test_conditioned_amplitudes_at_infinity():
    pair = analytic.coherent_pair(P111, 1e3)
    assert np.isclose(pair.beta_e_prime, -0.5 - 0.5j, atol=1e-12)
    assert np.isclose(pair.beta_g_prime, 0.5 - 0.5j, atol=1e-12)
    assert np.isclose(pair.dist_sq, 1.0, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_conditioned_amplitudes_have_equal_moduli(params, t):
    pair = analytic.coherent_pair(params, t)
    assert np.isclose(abs(pair.beta_e_prime), abs(pair.beta_g_prime), rtol=1e-12, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_distance_closed_form_matches_amplitude_separation(params, t):
    pair = analytic.coherent_pair(params, t)
    d2 = analytic.distance_sq_closed_form(params, t)
    assert np.isclose(d2, pair.dist_sq, rtol=1e-10, atol=1e-12)


def test_distance_vanishes_without_coupling():
    # omega = 0: both conditioned amplitudes coincide for all t
    p = ModelParams(0.0, 0.7, 0.4 + 0.3j)
    for t in (0.3, 1.0, 4.0):
        assert analytic.distance_sq_closed_form(p, t) == 0.0
        assert analytic.coherent_pair(p, t).dist_sq == 0.0


# ---------------------------------------------------------------- dephasing exponent

def test_phi_frozen_probe_points():
    assert np.isclose(
        complex(analytic._phi(P111, 1.5)), -1.269398315443989 - 2.2201377029631164j, atol=1e-12
    )
    assert np.isclose(
        complex(analytic._phi(P_SUB, 2.0)), -0.785620567434142 - 1.9162872269022773j, atol=1e-12
    )
    assert np.isclose(
        complex(analytic._phi(P_SUP, 0.7)), -0.3184789116286838 - 1.6517018631726832j, atol=1e-12
    )


def test_phi_long_time_asymptote():
    # slope -1 and intercept -1/4 for (omega, kappa, |F|) = (1, 1, 1)
    assert np.isclose(float(np.real(analytic._phi(P111, 60.0))), -60.25, atol=1e-9)
    assert np.isclose(analytic.re_phi_longtime_rate(P111), -1.0)
    assert np.isclose(analytic.re_phi_longtime_rate(P_SUB), -4 * 0.2 ** 3 / 1.04 ** 2)


def test_phi_without_drive_is_pure_rotation():
    p = ModelParams(1.0, 1.0, 0.0)
    for t in (0.1, 1.0, 7.0, 42.0):
        assert complex(analytic._phi(p, t)) == -1j * t
        assert analytic.distance_sq_closed_form(p, t) == 0.0


def test_phi_vanishes_at_t_zero():
    for p in (P111, P_SUB, P_SUP):
        assert complex(analytic._phi(p, 0.0)) == 0.0


def test_phase_parts_all_vanish_at_t_zero():
    parts = analytic.phase_parts(P111, 0.0)
    assert parts.z == 0.0 and parts.p == 0.0 and parts.q == 0.0
    assert parts.theta == 0.0 and parts.gamma == 0.0 and parts.phi == 0.0


def test_direct_assembly_matches_stable_phi_at_moderate_times():
    # the term-by-term grouping loses digits as kappa*t grows; it must
    # still agree tightly over the plotting window
    for p in (P111, P_SUB):
        for t in (0.5, 2.0, 5.0, 10.0):
            parts = analytic.phase_parts(p, t)
            direct = analytic.assemble_phi_from_parts(p, t, parts)
            assert abs(direct - parts.phi) < 1e-9


# ---------------------------------------------------------------- eigenvalues and entropies

@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_global_eigenvalues_sum_to_one_and_give_entropy(params, t):
    lp, lm, _ = analytic.global_eigen(params, t)
    assert np.isclose(lp + lm, 1.0, atol=1e-12)
    assert np.isclose(analytic.zeta_global(params, t), 2 * lp * lm, rtol=1e-10, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_field_eigenvalue_product_matches_entropy(params, t):
    Lp, Lm, _ = analytic.field_eigen(params, t)
    zf = analytic.zeta_field(params, t)
    assert np.isclose(Lp * Lm, 0.25 * (1 - math.exp(-analytic._dist_sq(params, t))), atol=1e-13)
    assert np.isclose(zf, 2 * Lp * Lm, rtol=1e-10, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_atom_eigenvalues_give_atom_entropy(params, t):
    ap, am = analytic.atom_eigen(params, t)
    assert np.isclose(ap + am, 1.0, atol=1e-12)
    assert np.isclose(analytic.zeta_atom(params, t), 2 * ap * am, rtol=1e-10, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_concurrence_from_eigenvalue_identity(params, t):
    lp, lm, _ = analytic.global_eigen(params, t)
    Lp, Lm, _ = analytic.field_eigen(params, t)
    c = analytic.concurrence(params, t)
    # compare squares: the eigenvalue route computes 1 - exp(-D^2/2) by
    # direct subtraction, whose absolute rounding floor would be amplified
    # to sqrt(ulp) ~ 1e-8 by the square root for tiny D^2
    assert np.isclose(c ** 2, (lp - lm) ** 2 * 4 * Lp * Lm, rtol=1e-9, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(params_st, times_st)
def test_observable_bounds(params, t):
    for f in (analytic.zeta_global, analytic.zeta_atom, analytic.zeta_field):
        val = float(f(params, t))
        assert -1e-15 <= val <= 0.5 + 1e-15
    assert -1e-15 <= float(analytic.concurrence(params, t)) <= 1.0 + 1e-15
    assert float(analytic.total_correlation(params, t)) >= -1e-15


def test_entropies_frozen_values_subcritical():
    rec = analytic.state_record(P_SUB, 2.0)
    assert np.isclose(rec.zeta, 0.39610643480060703, atol=1e-12)
    assert np.isclose(rec.zeta_a, 0.49348390624191907, atol=1e-12)
    assert np.isclose(rec.zeta_f, 0.46864053252203247, atol=1e-12)
    assert np.isclose(rec.corr, 0.32864403205357773, atol=1e-12)
    assert np.isclose(rec.concurrence, 0.44131048354035735, atol=1e-12)
    assert np.isclose(rec.lambda_plus, 0.7279183682806115, atol=1e-12)
    assert np.isclose(rec.Lambda_plus, 0.6252187435609532, atol=1e-12)
    assert np.isclose(rec.chi, 0.1872826370996519, atol=1e-12)


def test_state_record_is_consistent_with_scalar_functions():
    t = 3.3
    rec = analytic.state_record(P111, t)
    assert np.isclose(rec.zeta, analytic.zeta_global(P111, t), atol=1e-15)
    assert np.isclose(rec.zeta_a, analytic.zeta_atom(P111, t), atol=1e-15)
    assert np.isclose(rec.zeta_f, analytic.zeta_field(P111, t), atol=1e-15)
    assert np.isclose(rec.corr, analytic.total_correlation(P111, t), atol=1e-15)
    assert np.isclose(rec.concurrence, analytic.concurrence(P111, t), atol=1e-15)
    assert np.isclose(rec.im_phi, float(np.imag(analytic._phi(P111, t))), atol=1e-15)


def test_global_entropy_saturates_at_one_half():
    assert np.isclose(analytic.zeta_global(P111, 1e3), 0.5, atol=1e-15)


def test_field_entropy_saturation_frozen_value():
    # D^2(inf) = 1 at (1, 1, 1), so zeta_f -> (1 - 1/e)/2
    assert np.isclose(analytic.zeta_field(P111, 1e3), 0.31606027941427883, atol=1e-12)


def test_decoupled_atom_generates_no_entropy():
    p = ModelParams(0.0, 0.7, 0.4 + 0.3j)
    for t in (0.5, 2.0, 9.0):
        assert analytic.zeta_global(p, t) == 0.0
        assert analytic.zeta_atom(p, t) == 0.0
        assert analytic.zeta_field(p, t) == 0.0
        assert analytic.concurrence(p, t) == 0.0
        assert analytic.total_correlation(p, t) == 0.0


# ---------------------------------------------------------------- matrix elements and states

def test_matrix_elements_weights_for_balanced_superposition():
    amps = AtomicAmplitudes.symmetric()
    blocks = analytic.matrix_elements(P_SUB, amps, 2.0)
    assert np.isclose(blocks["rho_ee"].weight, 0.5, atol=1e-15)
    assert np.isclose(blocks["rho_gg"].weight, 0.5, atol=1e-15)
    phi = complex(analytic._phi(P_SUB, 2.0))
    assert np.isclose(blocks["rho_eg"].weight, 0.5 * np.exp(phi), atol=1e-15)
    pair = analytic.coherent_pair(P_SUB, 2.0)
    assert blocks["rho_ee"].ket_amplitude == pair.beta_e_prime
    assert blocks["rho_eg"].bra_amplitude == pair.beta_g_prime


def test_stationary_state_frozen_amplitudes():
    ss = analytic.stationary_state(P111, AtomicAmplitudes.symmetric())
    assert np.isclose(ss["amp_e"], -0.5 - 0.5j, atol=1e-15)
    assert np.isclose(ss["amp_g"], 0.5 - 0.5j, atol=1e-15)
    assert np.isclose(ss["weight_e"], 0.5, atol=1e-15)
    assert np.isclose(ss["weight_g"], 0.5, atol=1e-15)


def test_mean_photon_number_reaches_stationary_value():
    assert np.isclose(analytic.nbar_infinity(P111), 0.5)
    assert np.isclose(analytic.mean_photon_number(P111, 1e3), 0.5, atol=1e-12)
    assert np.isclose(analytic.mean_photon_number(P111, 0.0), 1.0)  # |  -iF/k |^2


def test_driven_mode_fixed_point():
    alpha0 = -1j  # -i F / k for (kappa, F) = (1, 1)
    for t in (0.0, 0.3, 2.0, 15.0):
        assert np.isclose(analytic.driven_mode_state(P111, t, alpha0), alpha0, atol=1e-15)
    # generic start decays toward the fixed point
    far = analytic.driven_mode_state(P111, 40.0, 3.0 + 2.0j)
    assert np.isclose(far, alpha0, atol=1e-12)


# ---------------------------------------------------------------- time scales and critical instants

def test_characteristic_times_frozen_values():
    tau_lt, tau_st, tau_atom = analytic.characteristic_times(P111)
    assert tau_lt == 1.0
    assert np.isclose(tau_st, 0.9085602964160698, atol=1e-15)
    assert tau_atom == 0.5
    assert np.isclose(tau_st ** 3, 0.75, atol=1e-15)


def test_characteristic_times_reject_degenerate_params():
    with pytest.raises(ValueError):
        analytic.characteristic_times(ModelParams(0.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        analytic.characteristic_times(ModelParams(1.0, 1.0, 0.0))


def test_critical_instants_subcritical_frozen_schedule():
    crit = analytic.critical_instants(P_SUB, 4 * math.pi)
    kinds = [(c.kind, c.classification, c.n_index) for c in crit]
    assert kinds == [
        ("extremum", "local_max", 0),
        ("disentangle", "local_min", -1),
        ("extremum", "local_max", 1),
        ("disentangle", "local_min", -1),
        ("extremum", "local_max", 2),
        ("extremum", "local_min", 3),
    ]
    roots = [c.t_c for c in crit if c.kind == "disentangle"]
    assert np.isclose(roots[0], 3.7688510523141416, atol=1e-9)
    assert np.isclose(roots[1], 5.80403609662885, atol=1e-9)
    # bracket really vanishes there
    for r in roots:
        assert abs(analytic._disentangle_bracket(P_SUB, r)) < 1e-11
    # extrema sit at odd quarter periods
    for c in crit:
        if c.kind == "extremum":
            assert np.isclose(c.t_c, (2 * c.n_index + 1) * math.pi / 2, atol=1e-15)
    # the n=3 instant lies past the transition time 5 ln 5
    assert crit[-1].t_c > math.log(5.0) / 0.2


def test_critical_instants_critical_damping_alternates():
    crit = analytic.critical_instants(P111, 4 * math.pi)
    assert [c.kind for c in crit] == ["extremum"] * 4
    assert [c.classification for c in crit] == [
        "local_max",
        "local_min",
        "local_max",
        "local_min",
    ]


def test_critical_instants_supercritical_has_no_roots():
    crit = analytic.critical_instants(ModelParams(1.0, 5.0, 1.0), 4 * math.pi)
    assert all(c.kind == "extremum" for c in crit)
    assert [c.classification for c in crit] == [
        "local_max",
        "local_min",
        "local_max",
        "local_min",
    ]


def test_critical_instants_rejects_bad_arguments():
    with pytest.raises(ValueError):
        analytic.critical_instants(ModelParams(0.0, 1.0, 1.0), 10.0)
    with pytest.raises(ValueError):
        analytic.critical_instants(P111, 0.0)


def test_field_entropy_vanishes_at_disentangle_roots():
    crit = analytic.critical_instants(P_SUB, 4 * math.pi)
    for c in crit:
        if c.kind == "disentangle":
            assert analytic.zeta_field(P_SUB, c.t_c) < 1e-14
            assert analytic.concurrence(P_SUB, c.t_c) < 1e-7
