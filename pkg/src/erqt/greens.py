"""Frequency-domain Green's functions and spectral densities.

All functions accept a scalar frequency or a 1-D array of frequencies. For
array input the returned matrices are stacked along a leading axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .errors import NotProportionalError, SingularMatrixError
from .model import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    Reservoir,
    ReservoirMode,
    Side,
    assemble_hamiltonian,
    check_proportionality,
    f_tilde,
    f_tilde_matrix,
)


def _as_batch(z):
    z = np.asarray(z)
    return np.atleast_1d(z).reshape(-1), z.ndim == 0


def _unbatch(out, scalar):
    return out[0] if scalar else out


def mode_gr(mode: ReservoirMode, z):
    return 1.0 / (np.asarray(z) - mode.omega + 0.5j * mode.gamma)


def mode_ga(mode: ReservoirMode, z):
    return 1.0 / (np.asarray(z) - mode.omega - 0.5j * mode.gamma)


def mode_glesser(mode: ReservoirMode, omega, side: Side | str, bias: BiasSpec, kind: RelaxationKind):
    """Lesser function of an isolated relaxed mode (purely imaginary)."""
    f = f_tilde(mode, omega, side, bias, kind)
    d = np.asarray(omega, dtype=float) - mode.omega
    return 1j * mode.gamma * f / (d * d + 0.25 * mode.gamma**2)


def _mode_gr_matrix(res: Reservoir, z: np.ndarray) -> np.ndarray:
    """g_k^r(z) for every (z, mode), shape (M, K)."""
    return 1.0 / (z[:, None] - res.omega[None, :] + 0.5j * res.gamma[None, :])


def _lorentzians(res: Reservoir, omegas: np.ndarray) -> np.ndarray:
    """i (g^r - g^a) = gamma / ((w - w_k)^2 + gamma^2/4), shape (M, K)."""
    d = omegas[:, None] - res.omega[None, :]
    return res.gamma[None, :] / (d * d + 0.25 * res.gamma[None, :] ** 2)


def _weighted_outer(res: Reservoir, weights: np.ndarray) -> np.ndarray:
    """sum_k weights[m, k] v_k v_k^dag, shape (M, N, N)."""
    vt = res.v.T  # (N, K)
    return np.matmul(vt[None, :, :] * weights[:, None, :], res.v.conj()[None, :, :])


def _reservoir_self_energy(res: Reservoir, z: np.ndarray) -> np.ndarray:
    return _weighted_outer(res, _mode_gr_matrix(res, z))


def self_energy_r(junction: JunctionModel, z, *, proportional_fast_path: bool = False):
    """Retarded self-energy of both reservoirs at (complex) frequency ``z``.

    With ``proportional_fast_path`` the right reservoir is folded into the
    left sum as a factor ``(1 + lam)``; the junction must be proportional.
    """
    zb, scalar = _as_batch(z)
    zb = zb.astype(complex)
    if proportional_fast_path:
        rep = check_proportionality(junction)
        if not rep.is_proportional:
            raise NotProportionalError("self-energy fast path needs proportional coupling")
        sigma = (1.0 + rep.lam) * _reservoir_self_energy(junction.left, zb)
    else:
        sigma = _reservoir_self_energy(junction.left, zb) + _reservoir_self_energy(junction.right, zb)
    return _unbatch(sigma, scalar)


def _solve_gr(H: np.ndarray, zb: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    n = H.shape[0]
    eye = np.eye(n)
    M = zb[:, None, None] * eye[None] - H[None] - sigma
    rhs = np.broadcast_to(eye, M.shape)
    try:
        G = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(
            "z - H_S - Sigma is singular (undamped, decoupled subspace at a resonance)"
        ) from exc
    if not np.all(np.isfinite(G)):
        raise SingularMatrixError("retarded Green's function is not finite")
    return G


def system_gr(junction: JunctionModel, z):
    """G^r(z) = (z - H_S - Sigma^r(z))^{-1} via a linear solve."""
    zb, scalar = _as_batch(z)
    zb = zb.astype(complex)
    G = _solve_gr(junction.H_S, zb, self_energy_r(junction, zb))
    return _unbatch(G, scalar)


def system_ga(junction: JunctionModel, omega):
    """G^a(w) = G^r(w)^dag for real ``omega``."""
    return np.swapaxes(np.asarray(system_gr(junction, omega)).conj(), -1, -2)


class GreensProvider(Protocol):
    """Maps a 1-D array of complex frequencies to stacked G^r matrices.

    Implementations must be analytic in the open upper half-plane and honor
    G^r(z)^dag = G^a(conj z).
    """

    def __call__(self, z: np.ndarray) -> np.ndarray: ...


class NonInteractingProvider:
    """G^r of a non-interacting junction: (z - H_S - Sigma^r(z))^{-1}."""

    def __init__(self, junction: JunctionModel):
        self.junction = junction

    def __call__(self, z):
        return system_gr(self.junction, np.atleast_1d(np.asarray(z, dtype=complex)))


@dataclass(frozen=True, eq=False)
class SpectralDensityPair:
    gamma_L: np.ndarray
    gamma_R: np.ndarray
    gamma_tilde_L: np.ndarray
    gamma_tilde_R: np.ndarray


def _densities(res: Reservoir, omegas: np.ndarray, bias: BiasSpec, kind: RelaxationKind):
    lor = _lorentzians(res, omegas)
    f = f_tilde_matrix(res, omegas, bias, kind)
    return _weighted_outer(res, lor), _weighted_outer(res, lor * f)


def spectral_densities(junction: JunctionModel, omega, bias: BiasSpec, kind: RelaxationKind | None = None):
    """Unweighted (Gamma) and occupation-weighted (Gamma tilde) broadening matrices."""
    kind = junction.kind if kind is None else RelaxationKind(kind)
    wb, scalar = _as_batch(omega)
    wb = wb.astype(float)
    gl, gtl = _densities(junction.left, wb, bias, kind)
    gr, gtr = _densities(junction.right, wb, bias, kind)
    if scalar:
        gl, gr, gtl, gtr = gl[0], gr[0], gtl[0], gtr[0]
    return SpectralDensityPair(gl, gr, gtl, gtr)


def _dagger(a):
    return np.swapaxes(a.conj(), -1, -2)


def system_glesser(junction: JunctionModel, omega, bias: BiasSpec, kind: RelaxationKind | None = None):
    """G^< = i G^r (Gamma~_L + Gamma~_R) G^a for a non-interacting junction."""
    kind = junction.kind if kind is None else RelaxationKind(kind)
    wb, scalar = _as_batch(omega)
    wb = wb.astype(float)
    Gr = system_gr(junction, wb)
    sd = spectral_densities(junction, wb, bias, kind)
    Gl = 1j * Gr @ (sd.gamma_tilde_L + sd.gamma_tilde_R) @ _dagger(Gr)
    return _unbatch(Gl, scalar)


def delta_gamma_tilde(junction: JunctionModel, omega, bias: BiasSpec, kind: RelaxationKind | None = None):
    """Left-mode sum of (f~_L - f~_R) v v^dag Lorentzians; needs proportional coupling.

    lam never enters: only left-reservoir quantities are used.
    """
    kind = junction.kind if kind is None else RelaxationKind(kind)
    if not check_proportionality(junction).is_proportional:
        raise NotProportionalError("delta Gamma tilde is defined only for proportional coupling")
    wb, scalar = _as_batch(omega)
    wb = wb.astype(float)
    out = _delta_gamma_tilde_batch(junction.left, wb, bias, kind)
    return _unbatch(out, scalar)


def _delta_gamma_tilde_batch(left: Reservoir, wb, bias, kind):
    lor = _lorentzians(left, wb)
    fl = f_tilde_matrix(left, wb, bias, kind)
    fr = f_tilde_matrix(left.with_label(Side.R), wb, bias, kind)
    return _weighted_outer(left, lor * (fl - fr))


def pole_estimates(junction: JunctionModel) -> np.ndarray:
    """Complex poles of G^r: eigenvalues of the closed problem with -i gamma/2 damping."""
    h = assemble_hamiltonian(junction)
    ns = junction.n_system
    damp = np.concatenate([junction.left.gamma, np.zeros(ns), junction.right.gamma])
    return np.linalg.eigvals(h - 0.5j * np.diag(damp))
