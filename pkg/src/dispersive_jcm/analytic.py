"""Closed-form dynamics of the dispersively coupled, driven, damped system.

Starting from the balanced atomic superposition with the field in the
driven mode's stationary coherent state, every quantity of interest has a
closed form: the pair of field amplitudes conditioned on the atomic level,
the complex dephasing exponent ``phi`` of the atomic coherence, the linear
entropies of the joint state and both subsystems, the total correlation,
the concurrence, the characteristic decoherence times, and the critical
instants where the field disentangles or its entropy turns over.

All operations are pure functions of ``(params, t)``.  Functions returning
plain numbers accept scalar or array ``t``; functions returning record
types take scalar ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .model import AtomicAmplitudes, ModelParams

__all__ = [
    "PhaseParts",
    "CoherentPair",
    "StateRecord",
    "CriticalInstant",
    "MatrixElement",
    "coherent_pair",
    "distance_sq_closed_form",
    "phase_parts",
    "assemble_phi_from_parts",
    "re_phi_longtime_rate",
    "matrix_elements",
    "global_eigen",
    "zeta_global",
    "zeta_atom",
    "zeta_field",
    "field_eigen",
    "atom_eigen",
    "total_correlation",
    "concurrence",
    "mean_photon_number",
    "characteristic_times",
    "critical_instants",
    "stationary_state",
    "nbar_infinity",
    "driven_mode_state",
    "state_record",
]


# ---------------------------------------------------------------- record types

@dataclass(frozen=True)
class PhaseParts:
    """The five building blocks of the dephasing exponent and the assembled phi.

    ``z``, ``p``, ``q`` are the disentangling functions of the coherence
    block's Lie-algebraic solution; ``theta`` and ``gamma`` are the real
    oscillatory/secular drive corrections.  ``phi`` is the full complex
    exponent; the atomic coherence weight decays as ``exp(Re phi)``.
    All six vanish identically at t = 0.
    """

    z: complex
    p: complex
    q: complex
    theta: float
    gamma: float
    phi: complex


@dataclass(frozen=True)
class CoherentPair:
    """Field amplitudes conditioned on the atomic level at one instant.

    ``beta_e``/``beta_g`` are the drive-frame displacements; the primed
    amplitudes include the moving-frame offset and are the physical
    coherent amplitudes multiplying each atomic projector.  ``dist_sq``
    is the squared distance |beta_e_prime - beta_g_prime|^2, controlling
    the field entropy.  The primed amplitudes have equal moduli at all
    times.
    """

    beta_e: complex
    beta_g: complex
    beta_e_prime: complex
    beta_g_prime: complex
    dist_sq: float


@dataclass(frozen=True)
class StateRecord:
    """Every scalar observable of the evolved state at one instant."""

    t: float
    zeta: float
    zeta_a: float
    zeta_f: float
    corr: float
    concurrence: float
    lambda_plus: float
    lambda_minus: float
    Lambda_plus: float
    Lambda_minus: float
    chi: float
    im_phi: float


@dataclass(frozen=True)
class CriticalInstant:
    """A zero of the field entropy (kind 'disentangle') or an extremum candidate.

    ``n_index`` counts the odd multiples of the quarter period for
    extremum instants (t_c = (2n+1)*pi/(2*omega)); it is -1 for
    disentangle roots, which are not indexed by that family.
    Disentangle roots are classified 'local_min' (the field entropy
    touches zero from above).
    """

    t_c: float
    kind: str  # "disentangle" | "extremum"
    classification: str  # "local_max" | "local_min"
    n_index: int


@dataclass(frozen=True)
class MatrixElement:
    """One block of the joint state: weight * |ket amplitude><bra amplitude|."""

    weight: complex
    ket_amplitude: complex
    bra_amplitude: complex


# ---------------------------------------------------------------- scalar kernels

def _cexpm1(zv):
    """exp(z) - 1 for complex z without cancellation for small |Re z|."""
    zv = np.asarray(zv, dtype=complex)
    x, y = zv.real, zv.imag
    return np.expm1(x) * np.cos(y) - 2.0 * np.sin(y / 2) ** 2 + 1j * np.exp(x) * np.sin(y)


def _amplitudes(params: ModelParams, t):
    """All four conditioned amplitudes; array-capable in t."""
    w, k, F = params.omega, params.kappa, complex(params.drive)
    c = k + 1j * w
    cb = k - 1j * w
    be = F / (w - 1j * k) * (np.exp(-c * t) - 1.0)
    bg = -F / (w + 1j * k) * (np.exp(-cb * t) - 1.0)
    bep = be - 1j * (F / k) * np.exp(-c * t)
    bgp = bg - 1j * (F / k) * np.exp(-cb * t)
    return be, bg, bep, bgp


def _dist_sq(params: ModelParams, t):
    _, _, u, v = _amplitudes(params, t)
    return np.abs(u - v) ** 2


def _theta_gamma(params: ModelParams, t):
    """The two real drive corrections, in the direct printed grouping."""
    w, k = params.omega, params.kappa
    F2 = abs(params.drive) ** 2
    w2 = k * k + w * w
    theta = F2 / (k * w2) * (
        np.exp(-2 * k * t) * (k * np.sin(2 * w * t) + w * np.cos(2 * w * t)) - w
    )
    gamma = (
        -F2 / k ** 2 * (1.0 - np.exp(-2 * k * t))
        - F2 / (k * w2) * (np.exp(-2 * k * t) * (k * np.cos(2 * w * t) - w * np.sin(2 * w * t)) - k)
    )
    return theta, gamma


def _zpq(params: ModelParams, t):
    """Disentangling functions in their direct closed form.

    The hyperbolic terms grow like exp(kappa*t), so this grouping loses
    accuracy beyond kappa*t of roughly 15; _phi below regroups the same
    expressions into uniformly decaying exponentials.
    """
    w, k = params.omega, params.kappa
    c = k + 1j * w
    W = np.cosh(c * t) - 1.0
    S = np.sinh(c * t)
    q = -(w / c ** 2) * W
    p = 1j * (k / c ** 2) * W - 1j * S / c
    z = -(2j * w * abs(params.drive) ** 2 / c ** 2) * (
        t
        + (4 * (np.exp(-c * t) - 1.0) - np.exp(-2 * c * t) + 1.0) / (2 * c)
        + 1j * (w / c ** 2) * W ** 2
    )
    return z, p, q


def _phi(params: ModelParams, t):
    """Complex dephasing exponent, grouped for stability at any kappa*t.

    Equal to the direct assembly of the z/p/q/theta/gamma pieces (see
    assemble_phi_from_parts) but with every exponential decaying, so it
    stays accurate arbitrarily far into the stationary regime.
    Array-capable in t.
    """
    w, k, F = params.omega, params.kappa, complex(params.drive)
    t = np.asarray(t, dtype=float)
    c = k + 1j * w
    cb = k - 1j * w
    F2 = abs(F) ** 2
    w2 = k * k + w * w
    eta = _cexpm1(-c * t)  # exp(-ct) - 1
    etab = np.conj(eta)
    # z + |F|^2(p^2 - q^2 + 2pq + |p+q|^2), regrouped in powers of eta.
    # The quadratic tail is written as |s|^2 - s^2 with s = eta/c so that
    # it cancels bit-exactly when omega = 0 (s is then real and both
    # squares are the same float).
    s = eta / c
    secular = (
        -(2j * w * F2 / c ** 2) * (t + eta * (2.0 - eta) / (2 * c))
        + F2 * ((s * np.conj(s)).real - s * s)
    )
    theta, _ = _theta_gamma(params, t)
    # gamma regrouped so both exponentials decay and every term carries a
    # structural factor of omega (sin^2(wt) or w itself), making the
    # omega = 0 limit exactly zero
    xi = _cexpm1(2 * (1j * w - k) * t)
    gamma = (2 * F2 / k ** 2) * np.exp(-2 * k * t) * np.sin(w * t) ** 2 + (
        F2 * w / (k ** 2 * w2)
    ) * (w * xi.real + k * xi.imag)
    pq = 1j * eta / c  # p + q, bounded for all t
    # bounded products exp(-ct) * {cosh(ct)-1, sinh(ct)} and conjugates
    e_cosh = 0.5 * eta ** 2
    e_cosh_b = 0.5 * np.exp(-2j * w * t) * etab ** 2
    e_sinh = 0.5 * (1.0 - np.exp(-2 * c * t))
    e_sinh_b = 0.5 * (np.exp(-2j * w * t) - np.exp(-2 * k * t))
    e_q = -(w / c ** 2) * e_cosh
    e_q_b = -(w / cb ** 2) * e_cosh_b
    e_p = (1j * k / c ** 2) * e_cosh - (1j / c) * e_sinh
    e_p_b = (-1j * k / cb ** 2) * e_cosh_b + (1j / cb) * e_sinh_b
    e_im_q = (e_q - e_q_b) / 2j  # exp(-ct) * Im q
    e_re_p = (e_p + e_p_b) / 2  # exp(-ct) * Re p
    resid = (F2 / k) * (
        2j * np.real(pq * np.exp(-k * t) * np.cos(w * t))
        - 2j * np.imag(pq * np.exp(-k * t) * np.sin(w * t))
        - 4 * (e_im_q + 1j * e_re_p)
    )
    return -1j * w * t + secular + 1j * theta + gamma + resid


# ---------------------------------------------------------------- operations

def coherent_pair(params: ModelParams, t: float) -> CoherentPair:
    """Conditioned field amplitudes and their squared separation at time t."""
    be, bg, u, v = _amplitudes(params, t)
    return CoherentPair(
        beta_e=complex(be),
        beta_g=complex(bg),
        beta_e_prime=complex(u),
        beta_g_prime=complex(v),
        dist_sq=float(abs(u - v) ** 2),
    )


def distance_sq_closed_form(params: ModelParams, t):
    """Squared amplitude separation in closed form.

    4|F|^2 w^2 [k(exp(-kt)cos wt - 1) - w exp(-kt) sin wt]^2 / (k^2 (k^2+w^2)^2).
    Equals |beta_e_prime - beta_g_prime|^2; the denominator carries
    (k^2+w^2) squared, which the infinite-time limit and the long-time
    decoherence rate both pin down.
    """
    w, k = params.omega, params.kappa
    g = _disentangle_bracket(params, t)
    return 4 * abs(params.drive) ** 2 * w ** 2 * g ** 2 / (k ** 2 * (k ** 2 + w ** 2) ** 2)


def _disentangle_bracket(params: ModelParams, t):
    """The oscillatory bracket whose zeros are the disentanglement instants."""
    w, k = params.omega, params.kappa
    return k * (np.exp(-k * t) * np.cos(w * t) - 1.0) - w * np.exp(-k * t) * np.sin(w * t)


def phase_parts(params: ModelParams, t: float) -> PhaseParts:
    """All pieces of the dephasing exponent at time t.

    ``phi`` uses the stable regrouped assembly; the z/p/q/theta/gamma
    fields are the direct closed forms and agree with the regrouping
    through assemble_phi_from_parts for moderate kappa*t.
    """
    z, p, q = _zpq(params, t)
    theta, gamma = _theta_gamma(params, t)
    return PhaseParts(
        z=complex(z),
        p=complex(p),
        q=complex(q),
        theta=float(theta),
        gamma=float(gamma),
        phi=complex(_phi(params, t)),
    )


def assemble_phi_from_parts(params: ModelParams, t: float, parts: PhaseParts) -> complex:
    """Reassemble phi directly from the five stored parts.

    This is the term-by-term grouping: -iwt, z, the quadratic drive block
    in p and q, i*theta + gamma, and the residual drive block.  It is
    algebraically identical to PhaseParts.phi but numerically useful only
    for kappa*t up to roughly 15 (the p/q hyperbolics grow like
    exp(kappa*t) and cancel); kept for internal-consistency checks.
    """
    w, k, F = params.omega, params.kappa, complex(params.drive)
    F2 = abs(F) ** 2
    c = k + 1j * w
    z, p, q = parts.z, parts.p, parts.q
    pq = p + q
    resid = (F2 / k) * (
        2j * np.real(pq * np.exp(-k * t) * np.cos(w * t))
        - 2j * np.imag(pq * np.exp(-k * t) * np.sin(w * t))
        - 4 * np.exp(-c * t) * (np.imag(q) + 1j * np.real(p))
    )
    return complex(
        -1j * w * t
        + z
        + F2 * (p ** 2 - q ** 2 + 2 * p * q + abs(pq) ** 2)
        + 1j * parts.theta
        + parts.gamma
        + resid
    )


def re_phi_longtime_rate(params: ModelParams) -> float:
    """Asymptotic slope of Re phi: -4 w^2 k |F|^2 / (k^2 + w^2)^2."""
    w, k = params.omega, params.kappa
    return -4 * w ** 2 * k * abs(params.drive) ** 2 / (k ** 2 + w ** 2) ** 2


def matrix_elements(params: ModelParams, amps: AtomicAmplitudes, t: float) -> dict:
    """Symbolic blocks of the joint state for a general atomic superposition.

    Returns {'rho_ee', 'rho_gg', 'rho_eg'} as MatrixElement triples
    (weight, ket amplitude, bra amplitude); each denotes
    weight * |ket><bra| over coherent field states.  Never expands to a
    dense matrix.
    """
    _, _, u, v = _amplitudes(params, t)
    phi = _phi(params, t)
    return {
        "rho_ee": MatrixElement(complex(abs(amps.c_e) ** 2), complex(u), complex(u)),
        "rho_gg": MatrixElement(complex(abs(amps.c_g) ** 2), complex(v), complex(v)),
        "rho_eg": MatrixElement(
            complex(amps.c_e * np.conj(amps.c_g) * np.exp(phi)), complex(u), complex(v)
        ),
    }


def global_eigen(params: ModelParams, t):
    """Eigenvalues (lambda_plus, lambda_minus) of the joint state and Im phi.

    For the balanced initial superposition the joint state has rank two
    with eigenvalues (1 +- exp(Re phi))/2; Im phi is the relative phase
    entering the eigenvectors.
    """
    phi = _phi(params, t)
    x = np.exp(np.real(phi))
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x), np.imag(phi)


def zeta_global(params: ModelParams, t):
    """Linear entropy of the joint state: (1 - exp(2 Re phi))/2."""
    return -0.5 * np.expm1(2.0 * np.real(_phi(params, t)))


def zeta_atom(params: ModelParams, t):
    """Linear entropy of the reduced atom: (1 - exp(2 Re phi - D^2))/2."""
    return -0.5 * np.expm1(2.0 * np.real(_phi(params, t)) - _dist_sq(params, t))


def zeta_field(params: ModelParams, t):
    """Linear entropy of the reduced field: (1 - exp(-D^2))/2."""
    return -0.5 * np.expm1(-_dist_sq(params, t))


def field_eigen(params: ModelParams, t):
    """Field eigenvalues (Lambda_plus, Lambda_minus) and overlap phase chi.

    chi = Im(beta_e_prime * conj(beta_g_prime)) is the phase of the
    coherent-state overlap <beta_g_prime|beta_e_prime>.
    """
    _, _, u, v = _amplitudes(params, t)
    x = np.exp(-0.5 * np.abs(u - v) ** 2)
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x), np.imag(u * np.conj(v))


def atom_eigen(params: ModelParams, t):
    """Atomic eigenvalues (lambda_g_rot, lambda_e_rot) = (1 +- e^{Re phi - D^2/2})/2.

    The labels refer to the rotated atomic basis in which the reduced
    atom is diagonal; the '+' eigenvalue belongs to the ground-like
    direction.
    """
    x = np.exp(np.real(_phi(params, t)) - 0.5 * _dist_sq(params, t))
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x)


def total_correlation(params: ModelParams, t):
    """Hilbert-Schmidt total correlation c = (zeta_f/2){1 + (1-2 zeta)(1+2 zeta_f)}."""
    zf = zeta_field(params, t)
    z = zeta_global(params, t)
    return 0.5 * zf * (1.0 + (1.0 - 2.0 * z) * (1.0 + 2.0 * zf))


def concurrence(params: ModelParams, t):
    """Concurrence of the joint state: exp(Re phi) * sqrt(1 - exp(-D^2)).

    Equal to 2|lambda_plus - lambda_minus| sqrt(Lambda_plus Lambda_minus);
    vanishes at t = 0 and at every disentanglement instant, and tends to 0
    in the stationary regime.
    """
    re_phi = np.real(_phi(params, t))
    d2 = _dist_sq(params, t)
    return np.exp(re_phi) * np.sqrt(-np.expm1(-d2))


def mean_photon_number(params: ModelParams, t):
    """Mean photon number of the reduced field, |beta_e_prime|^2.

    The two conditioned amplitudes have equal moduli, so the weights drop
    out for any atomic superposition.
    """
    _, _, u, _ = _amplitudes(params, t)
    return np.abs(u) ** 2


def characteristic_times(params: ModelParams):
    """Decoherence time scales (tau_lt, tau_st, tau_atom_st).

    tau_lt = (k^2+w^2)^2 / (4 w^2 k |F|^2) is the long-time global
    dephasing time, equal to 1/(k * D^2(infinity)).  tau_st =
    (3k / (4 |F|^2 w^2))^{1/3} is the short-time cubic-law constant in
    2 Re phi = -2 (t/tau_st)^3.  tau_atom_st = k/(2|F|w) is the atomic
    short-time quadratic constant.  All three diverge when either the
    coupling or the drive vanishes, so omega = 0 and F = 0 are rejected.
    """
    w, k, F = params.omega, params.kappa, abs(params.drive)
    if w == 0.0 or F == 0.0:
        raise ValueError("characteristic times diverge for omega = 0 or drive = 0")
    tau_lt = (k ** 2 + w ** 2) ** 2 / (4 * w ** 2 * k * F ** 2)
    tau_st = (3.0 * k / (4.0 * F ** 2 * w ** 2)) ** (1.0 / 3.0)
    tau_atom_st = k / (2 * F * w)
    return tau_lt, tau_st, tau_atom_st


def critical_instants(params: ModelParams, t_max: float, grid_step: float | None = None):
    """All critical instants in (0, t_max], sorted by time.

    Disentanglement instants are the positive zeros of the oscillatory
    bracket k(exp(-kt)cos wt - 1) - w exp(-kt) sin wt, found by sign
    bracketing on a uniform grid (default resolution pi/(64 w), finer than
    a quarter period so no sign change is skipped) and refined by
    bisection to relative tolerance 1e-12.  At each such root the field
    entropy and the concurrence vanish.

    Extremum candidates of the field entropy sit at t_c = (2n+1)pi/(2w)
    and are classified by the curvature sign of D^2: for k >= w, maxima
    for even n and minima for odd n; for k < w, maxima for even n, while
    odd-n instants are maxima before t_trans = ln(w/k)/k and minima after.
    """
    w, k = params.omega, params.kappa
    if not (w > 0.0):
        raise ValueError("critical instants require omega > 0")
    if not (t_max > 0.0):
        raise ValueError("t_max must be positive")
    found: list[CriticalInstant] = []

    # --- zeros of the disentanglement bracket
    f = lambda t: _disentangle_bracket(params, t)
    step = grid_step if grid_step is not None else math.pi / (64.0 * w)
    n_nodes = int(math.ceil(t_max / step)) + 1
    nodes = np.minimum(np.arange(n_nodes + 1) * step, t_max)
    vals = f(nodes)
    for i in range(n_nodes):
        a, b = nodes[i], nodes[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if a == b:
            continue
        if fb == 0.0:
            root = b
        elif fa == 0.0:
            continue  # t = 0 is the trivial zero; interior nodes are caught as fb
        elif fa * fb < 0.0:
            root = bisect(f, a, b, xtol=1e-15, rtol=1e-12)
        else:
            continue
        if root > 0.0:
            found.append(CriticalInstant(float(root), "disentangle", "local_min", -1))

    # --- quarter-period extremum candidates
    subcritical = k < w
    t_trans = math.log(w / k) / k if subcritical else None
    n = 0
    while True:
        t_c = (2 * n + 1) * math.pi / (2 * w)
        if t_c > t_max:
            break
        if n % 2 == 0:
            cls = "local_max"
        elif not subcritical:
            cls = "local_min"
        else:
            cls = "local_max" if t_c < t_trans else "local_min"
        found.append(CriticalInstant(float(t_c), "extremum", cls, n))
        n += 1

    found.sort(key=lambda c: c.t_c)
    return found


def stationary_state(params: ModelParams, amps: AtomicAmplitudes) -> dict:
    """Asymptotic classically correlated state as weights and amplitudes.

    {'weight_e', 'amp_e', 'weight_g', 'amp_g'}: the atom populations stay
    frozen while each conditioned field settles into its own coherent
    state F/(ik -+ w).
    """
    w, k, F = params.omega, params.kappa, complex(params.drive)
    return {
        "weight_e": float(abs(amps.c_e) ** 2),
        "amp_e": F / (1j * k - w),
        "weight_g": float(abs(amps.c_g) ** 2),
        "amp_g": F / (1j * k + w),
    }


def nbar_infinity(params: ModelParams) -> float:
    """Stationary mean photon number |F|^2 / (k^2 + w^2)."""
    return abs(params.drive) ** 2 / (params.kappa ** 2 + params.omega ** 2)


def driven_mode_state(params: ModelParams, t, alpha0: complex):
    """Coherent amplitude of the bare driven mode (atom absent).

    alpha(t) = alpha0 exp(-kt) - i (F/k)(1 - exp(-kt)); the fixed point is
    the stationary amplitude -iF/k.
    """
    k, F = params.kappa, complex(params.drive)
    decay = np.exp(-k * t)
    return alpha0 * decay - 1j * (F / k) * (-np.expm1(-k * np.asarray(t, dtype=float)))


def state_record(params: ModelParams, t: float) -> StateRecord:
    """Assemble every scalar observable at time t (balanced superposition)."""
    _, _, u, v = _amplitudes(params, t)
    phi = complex(_phi(params, t))
    d2 = float(abs(u - v) ** 2)
    x_g = math.exp(phi.real)
    x_f = math.exp(-0.5 * d2)
    zeta = -0.5 * math.expm1(2.0 * phi.real)
    zeta_f = -0.5 * math.expm1(-d2)
    return StateRecord(
        t=float(t),
        zeta=zeta,
        zeta_a=-0.5 * math.expm1(2.0 * phi.real - d2),
        zeta_f=zeta_f,
        corr=0.5 * zeta_f * (1.0 + (1.0 - 2.0 * zeta) * (1.0 + 2.0 * zeta_f)),
        concurrence=x_g * math.sqrt(-math.expm1(-d2)),
        lambda_plus=0.5 * (1.0 + x_g),
        lambda_minus=0.5 * (1.0 - x_g),
        Lambda_plus=0.5 * (1.0 + x_f),
        Lambda_minus=0.5 * (1.0 - x_f),
        chi=float(np.imag(u * np.conj(v))),
        im_phi=phi.imag,
    )
