"""Brute-force verification on a truncated atom-field space.

Everything here is deliberately independent of the closed forms in
:mod:`.analytic`: the master equation is integrated directly as a dense
matrix ODE with an adaptive high-order Runge-Kutta scheme, and all
observables (entropies, correlation, Wootters concurrence) are computed
from the resulting density matrix.  Agreement with the analytic module is
the package's central acceptance criterion.

Basis convention: the joint space is (atom) tensor (Fock), atom index
major, with atomic index 0 = excited and 1 = ground.  A joint matrix is
a 2(N+1) x 2(N+1) array whose [0:N+1, 0:N+1] block is the excited-excited
field block.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853
from scipy.linalg import expm

from .model import AtomicAmplitudes, ModelParams, stationary_amplitude
from . import analytic

__all__ = [
    "FockDensityMatrix",
    "IntegratorConfig",
    "TwoQubitEmbedding",
    "OracleError",
    "fock_truncation",
    "coherent_state_vector",
    "initial_state",
    "analytic_state_dense",
    "stationary_state_dense",
    "build_generator",
    "evolve",
    "evolve_trajectory",
    "partial_trace_field",
    "partial_trace_atom",
    "trace_distance",
    "embed_two_qubit",
    "wootters_concurrence",
    "observables",
]

log = logging.getLogger(__name__)


class OracleError(RuntimeError):
    """Integration or truncation failure in the brute-force evolution."""


@dataclass(frozen=True)
class FockDensityMatrix:
    """Dense joint density matrix on 2 atomic levels x n_fock Fock levels."""

    n_fock: int
    data: np.ndarray
    time: float = 0.0

    def validate(self) -> "FockDensityMatrix":
        """Check Hermiticity, trace, positivity, and truncation adequacy."""
        d = 2 * self.n_fock
        if self.data.shape != (d, d):
            raise ValueError(f"expected shape {(d, d)}, got {self.data.shape}")
        if np.max(np.abs(self.data - self.data.conj().T)) > 1e-10:
            raise ValueError("density matrix is not Hermitian within 1e-10")
        tr = float(np.real(np.trace(self.data)))
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        if float(np.linalg.eigvalsh(self.data)[0]) < -1e-8:
            raise ValueError("density matrix has an eigenvalue below -1e-8")
        if _edge_population(self.data, self.n_fock) > 1e-10 * tr:
            raise ValueError("edge Fock population above 1e-10: truncation inadequate")
        return self


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-step tolerances for the dense master-equation integration."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-11
    max_step: float = math.inf

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise ValueError("integrator tolerances must be positive")


@dataclass(frozen=True)
class TwoQubitEmbedding:
    """4x4 projection of the joint state onto atom x {two field directions}."""

    matrix: np.ndarray
    leakage: float
    degenerate: bool


# ---------------------------------------------------------------- construction

def fock_truncation(params: ModelParams) -> int:
    """Truncation index N from the amplitude bound abar = 2|F|/k.

    Every coherent amplitude in the dynamics (stationary -iF/k plus
    transient displacements) has modulus at most abar, and
    N = ceil(abar^2 + 8 abar + 20) pushes the Poisson tail of such a state
    below 1e-12.
    """
    abar = 2.0 * abs(params.drive) / params.kappa
    return int(math.ceil(abar * abar + 8.0 * abar + 20.0))


def coherent_state_vector(alpha: complex, n_levels: int) -> np.ndarray:
    """Fock coefficients of |alpha> up to n_levels, via a log-space recurrence."""
    if alpha == 0:
        v = np.zeros(n_levels, complex)
        v[0] = 1.0
        return v
    ns = np.arange(n_levels)
    logs = ns * math.log(abs(alpha)) - 0.5 * np.cumsum(np.log(np.maximum(ns, 1)))
    return np.exp(-0.5 * abs(alpha) ** 2 + logs) * np.exp(1j * ns * np.angle(complex(alpha)))


def initial_state(
    params: ModelParams, amps: AtomicAmplitudes, n_fock: int | None = None
) -> FockDensityMatrix:
    """Pure product start: atomic superposition x stationary coherent field."""
    n = (fock_truncation(params) if n_fock is None else n_fock - 1) + 1
    field_vec = coherent_state_vector(stationary_amplitude(params), n)
    psi = np.concatenate([amps.c_e * field_vec, amps.c_g * field_vec])
    return FockDensityMatrix(n_fock=n, data=np.outer(psi, psi.conj()), time=0.0)


def analytic_state_dense(
    params: ModelParams, amps: AtomicAmplitudes, t: float, n_fock: int
) -> np.ndarray:
    """Dense expansion of the closed-form joint state at time t."""
    elems = analytic.matrix_elements(params, amps, t)
    n = n_fock
    rho = np.zeros((2 * n, 2 * n), complex)

    def block(elem):
        ket = coherent_state_vector(elem.ket_amplitude, n)
        bra = coherent_state_vector(elem.bra_amplitude, n)
        return elem.weight * np.outer(ket, bra.conj())

    rho[:n, :n] = block(elems["rho_ee"])
    rho[n:, n:] = block(elems["rho_gg"])
    eg = block(elems["rho_eg"])
    rho[:n, n:] = eg
    rho[n:, :n] = eg.conj().T
    return rho


def stationary_state_dense(
    params: ModelParams, amps: AtomicAmplitudes, n_fock: int
) -> np.ndarray:
    """Dense expansion of the asymptotic classically correlated state."""
    stat = analytic.stationary_state(params, amps)
    n = n_fock
    rho = np.zeros((2 * n, 2 * n), complex)
    v_e = coherent_state_vector(stat["amp_e"], n)
    v_g = coherent_state_vector(stat["amp_g"], n)
    rho[:n, :n] = stat["weight_e"] * np.outer(v_e, v_e.conj())
    rho[n:, n:] = stat["weight_g"] * np.outer(v_g, v_g.conj())
    return rho


# ---------------------------------------------------------------- generator & evolution

def build_generator(params: ModelParams, n_fock: int):
    """Right-hand side of the master equation as a map on dense joint matrices.

    d rho/dt = -i[H, rho] + k(2 a rho a_dag - a_dag a rho - rho a_dag a)
    with H = w[(a_dag a + 1) P_e - a_dag a P_g] + (F a_dag + conj(F) a).
    """
    w, k, F = params.omega, params.kappa, complex(params.drive)
    n = n_fock
    a1 = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    num = a1.conj().T @ a1
    proj_e = np.diag([1.0, 0.0])
    proj_g = np.diag([0.0, 1.0])
    ham = w * (np.kron(proj_e, num + np.eye(n)) - np.kron(proj_g, num)) + np.kron(
        np.eye(2), F * a1.conj().T + np.conj(F) * a1
    )
    jump = np.kron(np.eye(2), a1)
    jump_dag = jump.conj().T
    num2 = jump_dag @ jump

    def generator(rho: np.ndarray) -> np.ndarray:
        return -1j * (ham @ rho - rho @ ham) + k * (
            2.0 * jump @ rho @ jump_dag - num2 @ rho - rho @ num2
        )

    return generator


def _edge_population(rho: np.ndarray, n_fock: int) -> float:
    return max(abs(rho[n_fock - 1, n_fock - 1]), abs(rho[-1, -1]))


def evolve_trajectory(
    params: ModelParams,
    rho0: FockDensityMatrix,
    times,
    config: IntegratorConfig | None = None,
):
    """Yield (t, dense matrix) at each requested time along one integration.

    ``times`` must be non-decreasing and start at or after ``rho0.time``.
    Matrices are interpolated from the integrator's dense output, so the
    cost is one integration regardless of how many points are requested.
    Raises :class:`OracleError` when the edge Fock population exceeds 1e-8
    at any accepted step or the integrator fails (step-size underflow).
    """
    config = config or IntegratorConfig()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        return
    if times[0] < rho0.time:
        raise ValueError("requested times precede the initial state")
    if np.any(np.diff(times) < 0):
        raise ValueError("requested times must be non-decreasing")
    n = rho0.n_fock
    d = 2 * n
    gen = build_generator(params, n)

    def rhs(t, y):
        rho = y.view(complex).reshape(d, d)
        return gen(rho).ravel().view(float)

    ptr = 0
    # emit any points sitting exactly at the start
    while ptr < times.size and times[ptr] <= rho0.time:
        yield float(times[ptr]), rho0.data.copy()
        ptr += 1
    if ptr == times.size:
        return
    solver = DOP853(
        rhs,
        rho0.time,
        rho0.data.ravel().view(float).copy(),
        float(times[-1]),
        rtol=config.rel_tol,
        atol=config.abs_tol,
        max_step=config.max_step,
    )
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise OracleError(f"integration failed at t={solver.t:.6g}: {message}")
        current = np.ascontiguousarray(solver.y).view(complex).reshape(d, d)
        edge = _edge_population(current, n)
        if edge > 1e-8:
            raise OracleError(
                f"edge Fock population {edge:.3e} at t={solver.t:.6g}: truncation blow-up"
            )
        if ptr < times.size and solver.t >= times[ptr]:
            dense = solver.dense_output()
            while ptr < times.size and times[ptr] <= solver.t:
                out = np.ascontiguousarray(dense(times[ptr])).view(complex).reshape(d, d)
                yield float(times[ptr]), out
                ptr += 1


def evolve(
    params: ModelParams,
    rho0: FockDensityMatrix,
    t_end: float,
    config: IntegratorConfig | None = None,
) -> FockDensityMatrix:
    """Integrate the master equation from rho0 to t_end.

    The returned state is trace-renormalized (drift is logged and must be
    at most 1e-8) and satisfies all :class:`FockDensityMatrix` invariants.
    """
    if t_end < rho0.time:
        raise ValueError("t_end precedes the initial state")
    if t_end == rho0.time:
        return FockDensityMatrix(rho0.n_fock, rho0.data.copy(), rho0.time)
    final = None
    for _, mat in evolve_trajectory(params, rho0, [t_end], config):
        final = mat
    tr = float(np.real(np.trace(final)))
    drift = abs(tr - 1.0)
    log.debug("trace drift %.3e over [%g, %g]", drift, rho0.time, t_end)
    if drift > 1e-8:
        raise OracleError(f"trace drift {drift:.3e} exceeds 1e-8")
    return FockDensityMatrix(rho0.n_fock, final / tr, float(t_end)).validate()


def partial_trace_field(rho: FockDensityMatrix | np.ndarray) -> np.ndarray:
    """Trace out the field: 2x2 atomic matrix (index 0 = excited)."""
    data = rho.data if isinstance(rho, FockDensityMatrix) else rho
    n = data.shape[0] // 2
    return np.einsum("ikjk->ij", data.reshape(2, n, 2, n))


def partial_trace_atom(rho: FockDensityMatrix | np.ndarray) -> np.ndarray:
    """Trace out the atom: (N+1)x(N+1) field matrix."""
    data = rho.data if isinstance(rho, FockDensityMatrix) else rho
    n = data.shape[0] // 2
    return np.einsum("kikj->ij", data.reshape(2, n, 2, n))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of (a - b) for Hermitian inputs."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def embed_two_qubit(
    rho: FockDensityMatrix | np.ndarray, beta_e_prime: complex, beta_g_prime: complex
) -> TwoQubitEmbedding:
    """Project the joint state onto atom x span{|beta_e'>, |beta_g'>}.

    The field basis is built by Gram-Schmidt with the first vector along
    |beta_e'>.  When the two coherent states coincide up to 1e-14 in
    overlap (disentanglement instants and t = 0), the span degenerates to
    one dimension; the second basis vector is then taken as the orthogonal
    displaced first-excited direction and the result is flagged.
    """
    data = rho.data if isinstance(rho, FockDensityMatrix) else rho
    n = data.shape[0] // 2
    f1 = coherent_state_vector(beta_e_prime, n)
    f2_raw = coherent_state_vector(beta_g_prime, n)
    overlap = np.vdot(f1, f2_raw)
    degenerate = abs(overlap) > 1.0 - 1e-14
    if degenerate:
        a1 = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
        disp = expm(beta_e_prime * a1.conj().T - np.conj(beta_e_prime) * a1)
        f2 = disp[:, 1]
    else:
        f2 = f2_raw - overlap * f1
        f2 = f2 / np.linalg.norm(f2)
    basis = np.stack([f1, f2], axis=1)  # n x 2
    proj = np.kron(np.eye(2), basis)  # 2n x 4
    reduced = proj.conj().T @ data @ proj
    tr = float(np.real(np.trace(reduced)))
    return TwoQubitEmbedding(matrix=reduced / tr, leakage=1.0 - tr, degenerate=degenerate)


_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])).real


def wootters_concurrence(rho4: np.ndarray) -> float:
    """Concurrence of a two-qubit density matrix.

    Uses the eigenvalues of rho * rho_tilde with rho_tilde =
    (sy x sy) conj(rho) (sy x sy): their square roots sorted descending
    give C = max(0, x1 - x2 - x3 - x4).
    """
    if rho4.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    if float(np.linalg.eigvalsh(rho4)[0]) < -1e-8:
        raise ValueError("input is not positive semidefinite within 1e-8")
    rho_tilde = _SIGMA_YY @ rho4.conj() @ _SIGMA_YY
    evals = np.linalg.eigvals(rho4 @ rho_tilde)
    x = np.sqrt(np.sort(np.abs(np.real(evals)))[::-1])
    return float(max(0.0, x[0] - x[1] - x[2] - x[3]))


def observables(rho: FockDensityMatrix | np.ndarray) -> dict:
    """Scalar observables of a joint state.

    purity = tr rho^2; linear_entropy = 1 - purity; nbar = mean photon
    number of the reduced field; coherence_magnitude = trace norm of the
    excited-ground block (equal to exp(Re phi)/2 for the balanced
    analytic state).
    """
    data = rho.data if isinstance(rho, FockDensityMatrix) else rho
    n = data.shape[0] // 2
    purity = float(np.real(np.einsum("ij,ji->", data, data)))
    field = partial_trace_atom(data)
    nbar = float(np.real(np.sum(np.arange(n) * np.diag(field))))
    coher = float(np.sum(np.linalg.svd(data[:n, n:], compute_uv=False)))
    return {
        "purity": purity,
        "linear_entropy": 1.0 - purity,
        "nbar": nbar,
        "coherence_magnitude": coher,
    }
