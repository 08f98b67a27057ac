"""Junction data model: reservoirs, biases, occupation functions.

Units: hbar = e = k_B = 1. Energies, temperatures and relaxation rates share
one energy unit and currents come out in e * energy / hbar.

Coupling convention: the coupling vector ``v`` of a reservoir mode k holds
the hopping amplitudes of ``sum_j v[j] c_j^dag c_k + h.c.``, so the mode adds
``v v^dag g_k`` to the system self-energy.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import expit

from .errors import InvalidBiasError, InvalidParameterError

HERMITIAN_RTOL = 1e-12
PROPORTIONAL_RTOL = 1e-10


class RelaxationKind(enum.Enum):
    MARKOVIAN = "markovian"
    NON_MARKOVIAN = "nonmarkovian"


class Side(enum.Enum):
    L = "L"
    R = "R"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BiasSpec:
    mu_L: float
    mu_R: float
    T_L: float = 0.0
    T_R: float = 0.0

    def __post_init__(self):
        for name in ("mu_L", "mu_R", "T_L", "T_R"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidBiasError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.T_L < 0 or self.T_R < 0:
            raise InvalidBiasError("temperatures must be >= 0")

    def mu(self, side: Side | str) -> float:
        return self.mu_L if Side(side) is Side.L else self.mu_R

    def temperature(self, side: Side | str) -> float:
        return self.T_L if Side(side) is Side.L else self.T_R

    def swapped(self) -> BiasSpec:
        return BiasSpec(self.mu_R, self.mu_L, self.T_R, self.T_L)

    @property
    def is_equilibrium(self) -> bool:
        return self.mu_L == self.mu_R and self.T_L == self.T_R


def fermi(omega, mu: float, T: float):
    """Fermi-Dirac occupation with an exact step at ``T == 0``.

    Works elementwise on arrays; returns a float for scalar input.
    """
    if T < 0:
        raise InvalidBiasError(f"temperature must be >= 0, got {T}")
    x = np.asarray(omega, dtype=float) - mu
    if T == 0:
        out = np.where(x < 0, 1.0, np.where(x > 0, 0.0, 0.5))
    else:
        out = expit(-x / T)
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class ReservoirMode:
    omega: float
    gamma: float
    v: np.ndarray

    def __post_init__(self):
        omega, gamma = float(self.omega), float(self.gamma)
        if not np.isfinite(omega):
            raise InvalidParameterError("mode energy must be finite")
        if not gamma > 0 or not np.isfinite(gamma):
            raise InvalidParameterError(f"mode relaxation gamma must be > 0, got {gamma}")
        v = np.array(self.v, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise InvalidParameterError("coupling vector must be finite")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "v", _frozen(v))


@dataclass(frozen=True, eq=False)
class Reservoir:
    """A finite set of relaxed modes, stored as arrays.

    ``omega`` and ``gamma`` have shape (K,), ``v`` has shape (K, N_S).
    """

    omega: np.ndarray
    gamma: np.ndarray
    v: np.ndarray
    label: Side = Side.L

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float).reshape(-1)
        gamma = np.array(self.gamma, dtype=float).reshape(-1)
        v = np.array(self.v, dtype=complex)
        if v.ndim == 1:
            v = v.reshape(len(omega), -1) if len(omega) else v.reshape(0, 0)
        if v.ndim != 2 or v.shape[0] != omega.shape[0] or gamma.shape != omega.shape:
            raise InvalidParameterError("omega, gamma and v must describe the same modes")
        if not np.all(np.isfinite(omega)) or not np.all(np.isfinite(v)):
            raise InvalidParameterError("mode energies and couplings must be finite")
        bad = np.flatnonzero(~(gamma > 0) | ~np.isfinite(gamma))
        if bad.size:
            raise InvalidParameterError(
                f"mode {int(bad[0])}: relaxation gamma must be > 0, got {gamma[bad[0]]}"
            )
        object.__setattr__(self, "omega", _frozen(omega))
        object.__setattr__(self, "gamma", _frozen(gamma))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "label", Side(self.label))

    @classmethod
    def from_modes(cls, modes: Sequence[ReservoirMode], label: Side | str = Side.L, n_system=None):
        if not modes:
            return cls(np.zeros(0), np.zeros(0), np.zeros((0, n_system or 0)), label)
        return cls(
            np.array([m.omega for m in modes]),
            np.array([m.gamma for m in modes]),
            np.array([m.v for m in modes]),
            label,
        )

    @property
    def modes(self) -> list[ReservoirMode]:
        return [ReservoirMode(w, g, c) for w, g, c in zip(self.omega, self.gamma, self.v)]

    @property
    def n_modes(self) -> int:
        return self.omega.shape[0]

    @property
    def n_system(self) -> int:
        return self.v.shape[1]

    def with_label(self, label: Side | str) -> Reservoir:
        return Reservoir(self.omega, self.gamma, self.v, Side(label))

    def scaled_gammas(self, s: float) -> Reservoir:
        return Reservoir(self.omega, self.gamma * s, self.v, self.label)


@dataclass(frozen=True, eq=False)
class JunctionModel:
    H_S: np.ndarray
    left: Reservoir
    right: Reservoir
    kind: RelaxationKind = RelaxationKind.MARKOVIAN

    def __post_init__(self):
        H = np.array(self.H_S, dtype=complex)
        if H.ndim == 0:
            H = H.reshape(1, 1)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise InvalidParameterError("H_S must be a square matrix")
        scale = max(np.max(np.abs(H), initial=0.0), 1e-300)
        if np.max(np.abs(H - H.conj().T), initial=0.0) > HERMITIAN_RTOL * scale:
            raise InvalidParameterError("H_S is not Hermitian")
        H = 0.5 * (H + H.conj().T)
        n = H.shape[0]
        left, right = self.left, self.right
        for res, side in ((left, Side.L), (right, Side.R)):
            if res.n_modes and res.n_system != n:
                raise InvalidParameterError(
                    f"{side.value} couplings have length {res.n_system}, system has {n} sites"
                )
        if left.n_modes == 0:
            left = Reservoir(left.omega, left.gamma, np.zeros((0, n)), Side.L)
        if right.n_modes == 0:
            right = Reservoir(right.omega, right.gamma, np.zeros((0, n)), Side.R)
        object.__setattr__(self, "H_S", _frozen(H))
        object.__setattr__(self, "left", left.with_label(Side.L))
        object.__setattr__(self, "right", right.with_label(Side.R))
        object.__setattr__(self, "kind", RelaxationKind(self.kind))

    @property
    def n_system(self) -> int:
        return self.H_S.shape[0]

    def reservoir(self, side: Side | str) -> Reservoir:
        return self.left if Side(side) is Side.L else self.right

    def swapped(self) -> JunctionModel:
        """Exchange the roles of the two reservoirs."""
        return JunctionModel(self.H_S, self.right, self.left, self.kind)

    def scaled_gammas(self, s: float) -> JunctionModel:
        if not s > 0:
            raise InvalidParameterError("gamma scale must be > 0")
        return JunctionModel(
            self.H_S, self.left.scaled_gammas(s), self.right.scaled_gammas(s), self.kind
        )

    def with_kind(self, kind: RelaxationKind | str) -> JunctionModel:
        return JunctionModel(self.H_S, self.left, self.right, RelaxationKind(kind))


@dataclass(frozen=True)
class ProportionalityReport:
    is_proportional: bool
    lam: float | None = None


def f_tilde(mode: ReservoirMode, omega, side: Side | str, bias: BiasSpec, kind: RelaxationKind):
    """Occupation weight of a mode as seen at probe frequency ``omega``.

    Markovian relaxation fixes it at the isolated mode energy; non-Markovian
    relaxation uses the probe frequency itself.
    """
    mu, T = bias.mu(side), bias.temperature(side)
    if RelaxationKind(kind) is RelaxationKind.MARKOVIAN:
        f = fermi(mode.omega, mu, T)
        return np.full(np.shape(omega), f) if np.ndim(omega) else f
    return fermi(omega, mu, T)


def f_tilde_matrix(res: Reservoir, omegas: np.ndarray, bias: BiasSpec, kind: RelaxationKind):
    """Occupation weights for every (frequency, mode) pair, shape (M, K)."""
    omegas = np.asarray(omegas, dtype=float).reshape(-1)
    mu, T = bias.mu(res.label), bias.temperature(res.label)
    if kind is RelaxationKind.MARKOVIAN:
        return np.broadcast_to(np.atleast_1d(fermi(res.omega, mu, T)), (omegas.size, res.n_modes))
    return np.broadcast_to(np.atleast_1d(fermi(omegas, mu, T))[:, None], (omegas.size, res.n_modes))


def make_proportional_right(left: Reservoir, lam: float) -> Reservoir:
    """Copy ``left`` with every coupling scaled by sqrt(lam)."""
    lam = float(lam)
    if not lam >= 0 or not np.isfinite(lam):
        raise InvalidParameterError(f"lambda must be >= 0, got {lam}")
    return Reservoir(left.omega.copy(), left.gamma.copy(), np.sqrt(lam) * left.v, Side.R)


def check_proportionality(junction: JunctionModel) -> ProportionalityReport:
    """Detect index-matched proportional coupling, ``v_R[k] = sqrt(lam) e^{i phi_k} v_L[k]``.

    A per-mode phase leaves every ``v v^dag`` unchanged and is accepted.
    Modes must match in order; permuted mode lists are reported as not
    proportional. With no coupling anywhere, lam is 1 by convention.
    """
    L, R = junction.left, junction.right
    no = ProportionalityReport(False)
    if L.n_modes != R.n_modes:
        return no
    if L.n_modes == 0:
        return ProportionalityReport(True, 1.0)
    for a, b in ((L.omega, R.omega), (L.gamma, R.gamma)):
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        if np.max(np.abs(a - b)) > PROPORTIONAL_RTOL * scale:
            return no
    nl = np.sum(np.abs(L.v) ** 2)
    nr = np.sum(np.abs(R.v) ** 2)
    if nl == 0:
        return ProportionalityReport(True, 1.0) if nr == 0 else no
    lam = float(nr / nl)
    overlap = np.sum(L.v.conj() * R.v, axis=1)
    phase = np.where(np.abs(overlap) > 0, overlap / np.where(overlap == 0, 1, np.abs(overlap)), 1.0)
    scale = max(np.max(np.abs(L.v)), np.max(np.abs(R.v)))
    if np.max(np.abs(R.v - np.sqrt(lam) * phase[:, None] * L.v)) > PROPORTIONAL_RTOL * scale:
        return no
    return ProportionalityReport(True, lam)


def discretize_band(
    profile: float | Callable | tuple,
    omega_range: tuple[float, float],
    n_modes: int,
    *,
    scheme: str = "uniform",
    gamma: float = 1.0,
    gamma_rule: str = "spacing",
    site: int = 0,
    n_system: int = 1,
    label: Side | str = Side.L,
) -> Reservoir:
    """Discretize a continuum broadening profile into relaxed modes.

    Each mode couples to system site ``site`` with ``|v_k|^2 =
    profile(w_k) * dw_k / (2 pi)`` so that ``sum_k 2 pi |v_k|^2`` reproduces
    the integrated profile.

    ``profile`` may be a constant (flat band), a callable, or a tabulated
    ``(omega_grid, values)`` pair that is interpolated linearly (zero outside
    the grid).
    ``gamma_rule`` is ``"constant"`` (every gamma_k equals ``gamma``) or
    ``"spacing"`` (gamma_k = gamma * dw_k). ``scheme`` is ``"uniform"`` (cell
    midpoints) or ``"midpoint-gauss"`` (Gauss-Legendre nodes and weights).
    """
    n_modes = int(n_modes)
    if n_modes < 1:
        raise InvalidParameterError("n_modes must be >= 1")
    lo, hi = map(float, omega_range)
    if not hi > lo:
        raise InvalidParameterError("band range must have omega_max > omega_min")
    if not 0 <= site < n_system:
        raise InvalidParameterError(f"site {site} outside system of size {n_system}")

    if scheme == "uniform":
        dw = np.full(n_modes, (hi - lo) / n_modes)
        w = lo + (np.arange(n_modes) + 0.5) * dw
    elif scheme == "midpoint-gauss":
        x, wts = leggauss(n_modes)
        w = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        dw = 0.5 * (hi - lo) * wts
    else:
        raise InvalidParameterError(f"unknown discretization scheme {scheme!r}")

    if callable(profile):
        dens = np.array([profile(x) for x in w], dtype=float)
    elif isinstance(profile, tuple):
        grid, values = (np.asarray(p, dtype=float) for p in profile)
        if np.any(values < 0):
            raise InvalidParameterError("profile must be nonnegative")
        dens = np.interp(w, grid, values, left=0.0, right=0.0)
    else:
        dens = np.full(n_modes, float(profile))
    if np.any(dens < 0) or not np.all(np.isfinite(dens)):
        raise InvalidParameterError("profile must be finite and nonnegative")

    if gamma_rule == "constant":
        gammas = np.full(n_modes, float(gamma))
    elif gamma_rule == "spacing":
        gammas = float(gamma) * dw
    else:
        raise InvalidParameterError(f"unknown gamma rule {gamma_rule!r}")

    v = np.zeros((n_modes, n_system), dtype=complex)
    v[:, site] = np.sqrt(dens * dw / (2 * np.pi))
    return Reservoir(w, gammas, v, label)


def single_level(
    epsilon: float = 0.0,
    *,
    omega0: float = 0.0,
    gamma: float = 0.2,
    v: float = 0.1,
    lam: float = 1.0,
    kind: RelaxationKind = RelaxationKind.MARKOVIAN,
) -> JunctionModel:
    """One level coupled to one relaxed mode per side (proportional coupling)."""
    left = Reservoir([omega0], [gamma], [[v]], Side.L)
    return JunctionModel([[epsilon]], left, make_proportional_right(left, lam), kind)


def assemble_hamiltonian(junction: JunctionModel) -> np.ndarray:
    """Single-particle matrix h of the closed L+S+R problem, ordering [L, S, R].

    ``h[m, n]`` is the coefficient of ``c_m^dag c_n``.
    """
    L, R = junction.left, junction.right
    nl, ns, nr = L.n_modes, junction.n_system, R.n_modes
    n = nl + ns + nr
    h = np.zeros((n, n), dtype=complex)
    s = slice(nl, nl + ns)
    h[s, s] = junction.H_S
    h[np.arange(nl), np.arange(nl)] = L.omega
    h[nl + ns + np.arange(nr), nl + ns + np.arange(nr)] = R.omega
    # h[j, k] = v_k[j]  (system row, mode column)
    h[s, :nl] = L.v.T
    h[:nl, s] = L.v.conj()
    h[s, nl + ns:] = R.v.T
    h[nl + ns:, s] = R.v.conj()
    return h
