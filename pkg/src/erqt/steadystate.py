"""Steady state of the single-particle correlation matrix under Markovian relaxation.

The correlation matrix ``C[m, n] = <c_m^dag c_n>`` (ordering L modes, system
sites, R modes) obeys

    dC/dt = A C + C A^dag + Q,    A = i h.T - D/2,

where ``h[m, n]`` multiplies ``c_m^dag c_n`` in the Hamiltonian (so
``C.T`` evolves under the familiar ``-i[h, .]``), ``D`` is the diagonal of mode
relaxation rates (zero on the system) and ``Q = diag(gamma_k f(omega_k))``.
The stationary C solves the Lyapunov equation ``A C + C A^dag = -Q``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .current import CurrentResult, Method
from .errors import (
    ErqtError,
    InvalidParameterError,
    UndampedSubspaceError,
    UnsupportedKindError,
)
from .model import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    Side,
    assemble_hamiltonian,
    fermi,
)

EIG_COND_LIMIT = 1e8
RESIDUAL_RTOL = 1e-10


class IllConditionedEigenbasisWarning(RuntimeWarning):
    pass


@dataclass(frozen=True, eq=False)
class DynamicsOperator:
    A: np.ndarray
    Q: np.ndarray
    n_left: int
    n_system: int
    n_right: int


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    C: np.ndarray
    n_left: int
    n_system: int
    n_right: int

    @property
    def left_slice(self):
        return slice(0, self.n_left)

    @property
    def system_slice(self):
        return slice(self.n_left, self.n_left + self.n_system)

    @property
    def right_slice(self):
        return slice(self.n_left + self.n_system, self.n_left + self.n_system + self.n_right)


def assemble_dynamics(junction: JunctionModel, bias: BiasSpec) -> DynamicsOperator:
    if junction.kind is not RelaxationKind.MARKOVIAN:
        raise UnsupportedKindError("the correlation-matrix equation exists only for Markovian relaxation")
    L, R = junction.left, junction.right
    nl, ns, nr = L.n_modes, junction.n_system, R.n_modes
    h = assemble_hamiltonian(junction)
    damp = np.concatenate([L.gamma, np.zeros(ns), R.gamma])
    fill = np.concatenate([
        L.gamma * np.atleast_1d(fermi(L.omega, bias.mu_L, bias.T_L)),
        np.zeros(ns),
        R.gamma * np.atleast_1d(fermi(R.omega, bias.mu_R, bias.T_R)),
    ])
    A = 1j * h.T - 0.5 * np.diag(damp)
    return DynamicsOperator(A, np.diag(fill).astype(float), nl, ns, nr)


def _residual(dyn: DynamicsOperator, C: np.ndarray) -> float:
    return float(np.max(np.abs(dyn.A @ C + C @ dyn.A.conj().T + dyn.Q), initial=0.0))


def solve_steady_c(dyn: DynamicsOperator) -> CorrelationMatrix:
    """Unique stationary correlation matrix.

    Uses the eigenbasis of A; when its eigenvector matrix is badly
    conditioned (or the residual check fails) the Schur-based solver from
    scipy is used instead.
    """
    A, Q = dyn.A, dyn.Q
    n = A.shape[0]
    if n == 0:
        return CorrelationMatrix(np.zeros((0, 0), complex), 0, 0, 0)
    lam, V = np.linalg.eig(A)
    norm_a = np.linalg.norm(A, 2)
    if np.max(lam.real) >= -1e-12 * norm_a:
        raise UndampedSubspaceError(
            "dynamics has an undamped mode (a system level decoupled from all reservoirs); "
            "the steady state is not unique"
        )

    C = None
    if np.linalg.cond(V) <= EIG_COND_LIMIT:
        Vinv = np.linalg.inv(V)
        Qt = Vinv @ Q @ Vinv.conj().T
        Ct = -Qt / (lam[:, None] + lam.conj()[None, :])
        C = V @ Ct @ V.conj().T
    else:
        warnings.warn("eigenvector matrix ill-conditioned; using Schur solver",
                      IllConditionedEigenbasisWarning, stacklevel=2)

    q_scale = float(np.max(np.abs(Q), initial=0.0))
    if C is None or _residual(dyn, C) > RESIDUAL_RTOL * q_scale:
        C = scipy.linalg.solve_continuous_lyapunov(A, -Q)
    C = 0.5 * (C + C.conj().T)
    res = _residual(dyn, C)
    if res > RESIDUAL_RTOL * q_scale:
        raise ErqtError(f"steady-state residual {res:.3g} exceeds tolerance")
    return CorrelationMatrix(C, dyn.n_left, dyn.n_system, dyn.n_right)


def current_from_c(junction: JunctionModel, C: CorrelationMatrix, side: Side | str = Side.L) -> CurrentResult:
    """Particle current from reservoir ``side`` into the system.

    ``I = -2 sum_{k, j} Im[v_kj C_kj]`` with ``v_kj`` the coefficient of
    ``c_k^dag c_j``.
    """
    side = Side(side)
    if (C.n_left, C.n_system, C.n_right) != (junction.left.n_modes, junction.n_system, junction.right.n_modes):
        raise InvalidParameterError("correlation matrix layout does not match the junction")
    res = junction.reservoir(side)
    rows = C.left_slice if side is Side.L else C.right_slice
    block = C.C[rows, C.system_slice]  # C_kj, shape (K, N_S)
    value = -2.0 * float(np.sum((res.v.conj() * block).imag))
    return CurrentResult(value, Method.LYAPUNOV)


def occupations(C: CorrelationMatrix) -> np.ndarray:
    d = np.diag(C.C)
    if d.size and np.max(np.abs(d.imag)) > 1e-12:
        raise ErqtError("correlation matrix diagonal is not real")
    return d.real.copy()


def lyapunov_current(junction: JunctionModel, bias: BiasSpec) -> CurrentResult:
    C = solve_steady_c(assemble_dynamics(junction, bias))
    return current_from_c(junction, C, Side.L)


def propagate_transient(dyn: DynamicsOperator, C0: CorrelationMatrix | np.ndarray, t_final: float, dt: float) -> CorrelationMatrix:
    """Fixed-step RK4 integration of dC/dt = A C + C A^dag + Q.

    Requires ``dt * ||A||_2 < 0.1``. The state is re-symmetrized after
    every step.
    """
    A, Q = dyn.A, dyn.Q
    if not dt > 0 or dt * np.linalg.norm(A, 2) >= 0.1:
        raise InvalidParameterError("step size must satisfy 0 < dt * ||A|| < 0.1")
    C = np.array(C0.C if isinstance(C0, CorrelationMatrix) else C0, dtype=complex)
    Ad = A.conj().T

    def rhs(X):
        return A @ X + X @ Ad + Q

    n_steps = int(np.ceil(t_final / dt - 1e-12))
    h = t_final / n_steps if n_steps else 0.0
    for _ in range(n_steps):
        k1 = rhs(C)
        k2 = rhs(C + 0.5 * h * k1)
        k3 = rhs(C + 0.5 * h * k2)
        k4 = rhs(C + h * k3)
        C = C + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        C = 0.5 * (C + C.conj().T)
    return CorrelationMatrix(C, dyn.n_left, dyn.n_system, dyn.n_right)
