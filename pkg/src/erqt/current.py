"""Steady-state current formulas.

Every route returns a :class:`CurrentResult` in units of e * energy / hbar,
positive for particles flowing from the left reservoir into the system.
Frequency integrals are carried out by :func:`erqt.quadrature.integrate_adaptive`
over a finite window chosen by :func:`auto_window`.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ErqtError,
    InvalidOccupancyError,
    NotProportionalError,
    QuadratureError,
    UnsupportedKindError,
)
from .greens import (
    GreensProvider,
    NonInteractingProvider,
    _delta_gamma_tilde_batch,
    _solve_gr,
    pole_estimates,
    spectral_densities,
    system_gr,
)
from .model import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    check_proportionality,
    fermi,
)
from .quadrature import QuadratureResult, QuadratureSpec, integrate_adaptive

TWO_PI = 2.0 * np.pi


class Method(str, enum.Enum):
    GENERAL = "general"
    NONINTERACTING = "noninteracting"
    PC_INTEGRAL = "pc_integral"
    PC_ANALYTIC = "pc_analytic"
    WEAK_GAMMA = "weak_gamma"
    STRONG_GAMMA = "strong_gamma"
    LANDAUER_CONTINUUM = "landauer_continuum"
    OCCUPANCY_LARGE_GAMMA = "occupancy_large_gamma"
    LYAPUNOV = "lyapunov"


MARKOVIAN_ONLY = frozenset({
    Method.PC_ANALYTIC, Method.WEAK_GAMMA, Method.STRONG_GAMMA,
    Method.OCCUPANCY_LARGE_GAMMA, Method.LYAPUNOV,
})
PROPORTIONAL_ONLY = frozenset({
    Method.PC_INTEGRAL, Method.PC_ANALYTIC, Method.WEAK_GAMMA, Method.STRONG_GAMMA,
})


@dataclass(frozen=True)
class CurrentResult:
    value: float
    method: Method
    abs_error_estimate: float = 0.0
    n_evaluations: int = 0
    window: tuple[float, float] | None = None
    diagnostics: tuple[str, ...] = ()


def _dagger(a):
    return np.swapaxes(a.conj(), -1, -2)


def _trace_prod(a, b):
    """tr(a_m b_m) for stacks of matrices."""
    return np.einsum("mij,mji->m", a, b)


def _require_markovian(junction, what):
    if junction.kind is not RelaxationKind.MARKOVIAN:
        raise UnsupportedKindError(f"{what} is defined only for Markovian relaxation")


def _require_proportional(junction, what) -> float:
    rep = check_proportionality(junction)
    if not rep.is_proportional:
        raise NotProportionalError(f"{what} requires proportional coupling")
    return rep.lam


# --- integration window ----------------------------------------------------


def auto_window(junction: JunctionModel, bias: BiasSpec, spec: QuadratureSpec | None = None):
    """Frequency window capturing every Lorentzian feature of the integrands.

    Spans the mode energies and the real parts of the poles of G^r, padded by
    ``window_padding_factor * max(gamma_k, T_L, T_R)``, then stretched to
    contain both chemical potentials. The integration routes extend this
    window further until the tails drop below tolerance.
    """
    spec = spec or QuadratureSpec()
    gammas = np.concatenate([junction.left.gamma, junction.right.gamma])
    scale = max(np.max(gammas, initial=0.0), bias.T_L, bias.T_R)
    if scale == 0:
        scale = max(np.max(np.abs(junction.H_S), initial=0.0), 1.0)
    pad = spec.window_padding_factor * scale
    centers = np.concatenate([
        junction.left.omega, junction.right.omega, pole_estimates(junction).real,
    ])
    lo = float(np.min(centers)) - pad
    hi = float(np.max(centers)) + pad
    lo = min(lo, bias.mu_L, bias.mu_R)
    hi = max(hi, bias.mu_L, bias.mu_R)
    return lo, hi


def _breakpoints(junction: JunctionModel, bias: BiasSpec, window) -> list[float]:
    width = window[1] - window[0]
    pts = [bias.mu_L, bias.mu_R]
    pts.extend(junction.left.omega)
    pts.extend(junction.right.omega)
    for p in pole_estimates(junction):
        pts.append(p.real)
        h = -p.imag
        if 0 < h < width * 1e-3:
            # graded panels around a narrow resonance
            for m in (2.0, 20.0, 200.0):
                pts.extend((p.real - m * h, p.real + m * h))
    return pts


def _integrate(integrand, junction, bias, spec, window=None):
    """Integrate over the auto window, then extend it outward until the tails are negligible.

    Each side grows by segments of doubling length; the size of the last
    segment added on each side is folded into the error estimate. The
    returned window is the final, extended one.
    """
    spec = spec or QuadratureSpec()
    window = window or auto_window(junction, bias, spec)
    res = integrate_adaptive(integrand, window, spec, _breakpoints(junction, bias, window))
    value, err, n_eval = res.value, res.abs_error, res.n_evaluations
    lo, hi = window
    step = 0.5 * (hi - lo)
    for direction in (-1.0, 1.0):
        edge, ext = (lo if direction < 0 else hi), step
        for _ in range(60):
            seg = (edge - ext, edge) if direction < 0 else (edge, edge + ext)
            piece = integrate_adaptive(integrand, seg, spec)
            value += piece.value
            err += piece.abs_error
            n_eval += piece.n_evaluations
            edge = seg[0] if direction < 0 else seg[1]
            ext *= 2.0
            if abs(piece.value) <= 0.1 * max(spec.abs_tol, spec.rel_tol * abs(value)):
                err += abs(piece.value)
                break
        else:
            raise QuadratureError("integrand tails do not decay", value=value, abs_error=err, n_evaluations=n_eval)
        if direction < 0:
            lo = edge
        else:
            hi = edge
    return QuadratureResult(value, err, n_eval, res.n_panels), (lo, hi)


# --- frequency-integral routes ---------------------------------------------


def _stack(junction, w, bias):
    sd = spectral_densities(junction, w, bias, junction.kind)
    Gr = system_gr(junction, w)
    return Gr, sd


def current_general(junction: JunctionModel, bias: BiasSpec, spec: QuadratureSpec | None = None) -> CurrentResult:
    """Symmetrized left/right current with G^< from the Keldysh closure.

    Does not need proportional coupling; valid for either relaxation kind.
    A nonzero result at zero bias (Markovian, asymmetric reservoirs) is
    returned as computed.
    """
    spec = spec or QuadratureSpec()

    def integrand(w):
        Gr, sd = _stack(junction, w, bias)
        Ga = _dagger(Gr)
        Gl = 1j * Gr @ (sd.gamma_tilde_L + sd.gamma_tilde_R) @ Ga
        t = _trace_prod(sd.gamma_L - sd.gamma_R, Gl) + _trace_prod(sd.gamma_tilde_L - sd.gamma_tilde_R, Gr - Ga)
        return 0.5j * t / TWO_PI

    res, window = _integrate(integrand, junction, bias, spec)
    value = complex(res.value)
    if abs(value.imag) > 10 * spec.abs_tol:
        raise ErqtError(f"general current has imaginary residue {value.imag:.3g}")
    return CurrentResult(value.real, Method.GENERAL, res.abs_error, res.n_evaluations, window)


def current_noninteracting(
    junction: JunctionModel,
    bias: BiasSpec,
    spec: QuadratureSpec | None = None,
    *,
    fast_path: bool | None = None,
) -> CurrentResult:
    """Caroli-type trace formula for a non-interacting junction.

    For non-Markovian relaxation the occupations factor out and the
    transmission form ``(f_L - f_R) tr[G_L G^r G_R G^a]`` is used unless
    ``fast_path=False``.
    """
    nonmarkov = junction.kind is RelaxationKind.NON_MARKOVIAN
    if fast_path is None:
        fast_path = nonmarkov
    if fast_path and not nonmarkov:
        raise UnsupportedKindError("the transmission fast path needs non-Markovian relaxation")

    if fast_path:
        def integrand(w):
            Gr, sd = _stack(junction, w, bias)
            trans = _trace_prod(sd.gamma_L @ Gr, sd.gamma_R @ _dagger(Gr)).real
            df = fermi(w, bias.mu_L, bias.T_L) - fermi(w, bias.mu_R, bias.T_R)
            return df * trans / TWO_PI
    else:
        def integrand(w):
            Gr, sd = _stack(junction, w, bias)
            Ga = _dagger(Gr)
            t = _trace_prod(sd.gamma_tilde_L @ Ga, sd.gamma_R @ Gr) - _trace_prod(sd.gamma_L @ Gr, sd.gamma_tilde_R @ Ga)
            return t.real / TWO_PI

    res, window = _integrate(integrand, junction, bias, spec)
    return CurrentResult(float(res.value), Method.NONINTERACTING, res.abs_error, res.n_evaluations, window)


def current_pc_integral(
    junction: JunctionModel,
    bias: BiasSpec,
    spec: QuadratureSpec | None = None,
    provider: GreensProvider | None = None,
) -> CurrentResult:
    """Proportional-coupling current as a frequency integral of tr[dGamma~ (G^r - G^a)]."""
    lam = _require_proportional(junction, "pc_integral")
    pref = lam / (1.0 + lam)
    provider = provider or NonInteractingProvider(junction)
    if pref == 0:
        return CurrentResult(0.0, Method.PC_INTEGRAL)

    def integrand(w):
        Gr = np.asarray(provider(w.astype(complex)))
        dg = _delta_gamma_tilde_batch(junction.left, w, bias, junction.kind)
        return (1j * pref * _trace_prod(dg, Gr - _dagger(Gr))).real / TWO_PI

    res, window = _integrate(integrand, junction, bias, spec)
    return CurrentResult(float(res.value), Method.PC_INTEGRAL, res.abs_error, res.n_evaluations, window)


# --- closed forms ------------------------------------------------------------


def _left_occupation_difference(junction, bias):
    w = junction.left.omega
    return np.atleast_1d(fermi(w, bias.mu_L, bias.T_L)) - np.atleast_1d(fermi(w, bias.mu_R, bias.T_R))


def current_pc_analytic(
    junction: JunctionModel, bias: BiasSpec, provider: GreensProvider | None = None
) -> CurrentResult:
    """Closed form for proportional coupling with Markovian relaxation.

    Evaluates G^r at ``omega_k + i gamma_k / 2`` for each left mode; no
    quadrature. ``provider`` may supply G^r for an interacting system.
    """
    _require_markovian(junction, "pc_analytic")
    lam = _require_proportional(junction, "pc_analytic")
    left = junction.left
    df = _left_occupation_difference(junction, bias)
    active = np.flatnonzero(df != 0)
    if active.size == 0 or lam == 0:
        return CurrentResult(0.0, Method.PC_ANALYTIC)
    z = left.omega[active] + 0.5j * left.gamma[active]
    if provider is None:
        G = _solve_gr(junction.H_S, z, (1.0 + lam) * _pc_left_sigma(left, z))
    else:
        G = np.asarray(provider(z))
    im_g = (G - _dagger(G)) / 2j
    v = left.v[active]
    contraction = np.einsum("ki,kij,kj->k", v.conj(), im_g, v).real
    value = -2.0 * lam / (1.0 + lam) * float(np.sum(df[active] * contraction))
    return CurrentResult(value, Method.PC_ANALYTIC, 0.0, int(active.size))


def _pc_left_sigma(left, z):
    g = 1.0 / (z[:, None] - left.omega[None, :] + 0.5j * left.gamma[None, :])
    return np.matmul(left.v.T[None] * g[:, None, :], left.v.conj()[None])


def current_weak_gamma(junction: JunctionModel, bias: BiasSpec) -> CurrentResult:
    """Weak-relaxation limit: 2 lam/(1+lam)^2 sum_k gamma_k (f_L - f_R)."""
    _require_markovian(junction, "weak_gamma")
    lam = _require_proportional(junction, "weak_gamma")
    df = _left_occupation_difference(junction, bias)
    value = 2.0 * lam / (1.0 + lam) ** 2 * float(np.sum(junction.left.gamma * df))
    return CurrentResult(value, Method.WEAK_GAMMA)


def current_strong_gamma(junction: JunctionModel, bias: BiasSpec) -> CurrentResult:
    """Strong-relaxation limit: 4 lam/(1+lam) sum_k (f_L - f_R) |v_k|^2 / gamma_k."""
    _require_markovian(junction, "strong_gamma")
    lam = _require_proportional(junction, "strong_gamma")
    left = junction.left
    df = _left_occupation_difference(junction, bias)
    norms = np.sum(np.abs(left.v) ** 2, axis=1)
    value = 4.0 * lam / (1.0 + lam) * float(np.sum(df * norms / left.gamma))
    return CurrentResult(value, Method.STRONG_GAMMA)


def current_occupancy_large_gamma(
    junction: JunctionModel, bias: BiasSpec, occupations: Sequence[float]
) -> CurrentResult:
    """Large-gamma current from the system site occupations.

    ``occupations`` is the diagonal of the correlation matrix on the system
    sites. Works with or without proportional coupling.
    """
    _require_markovian(junction, "occupancy_large_gamma")
    n = np.asarray(occupations, dtype=float).reshape(-1)
    if n.size != junction.n_system:
        raise InvalidOccupancyError(f"expected {junction.n_system} occupations, got {n.size}")
    if np.any(n < -1e-10) or np.any(n > 1 + 1e-10):
        raise InvalidOccupancyError("occupations must lie in [0, 1]")

    def side_current(res):
        f = np.atleast_1d(fermi(res.omega, bias.mu(res.label), bias.temperature(res.label)))
        vv = np.sum(np.abs(res.v) ** 2, axis=1)
        vnv = np.sum(np.abs(res.v) ** 2 * n[None, :], axis=1)
        return 2.0 * float(np.sum((f * vv - vnv) / res.gamma))

    value = side_current(junction.left) - side_current(junction.right)
    return CurrentResult(value, Method.OCCUPANCY_LARGE_GAMMA)


# --- continuum reference -----------------------------------------------------


def wide_band_matrix(gamma0: float, site: int = 0, n_system: int = 1) -> np.ndarray:
    """Constant broadening ``gamma0`` on one system site."""
    g = np.zeros((n_system, n_system), dtype=complex)
    g[site, site] = gamma0
    return g


def continuum_transmission(
    H_S, gamma_L, gamma_R, band: tuple[float, float] | None = None
) -> Callable[[np.ndarray], np.ndarray]:
    """Transmission tr[G_L G^r G_R G^a] with relaxation-free leads.

    ``gamma_L``/``gamma_R`` are constant broadening matrices (wide band) or
    callables mapping a frequency array to stacked matrices. The self-energy
    is taken as ``-i(G_L + G_R)/2``; the level shift from a finite band is
    not included. With ``band`` given the transmission is zero outside it.
    """
    H = np.asarray(H_S, dtype=complex)
    H = H.reshape(1, 1) if H.ndim == 0 else H

    def as_func(g):
        if callable(g):
            return g
        g = np.asarray(g, dtype=complex).reshape(H.shape)
        return lambda w: np.broadcast_to(g, (np.size(w), *H.shape))

    fl, fr = as_func(gamma_L), as_func(gamma_R)

    def transmission(w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.zeros(w.shape)
        inside = np.ones(w.shape, bool) if band is None else (w >= band[0]) & (w <= band[1])
        if np.any(inside):
            wi = w[inside]
            gl, gr = fl(wi), fr(wi)
            G = _solve_gr(H, wi.astype(complex), -0.5j * (gl + gr))
            out[inside] = _trace_prod(gl @ G, gr @ _dagger(G)).real
        return out

    if callable(gamma_L) or callable(gamma_R):
        transmission.poles = None
    else:
        gsum = np.reshape(gamma_L, H.shape) + np.reshape(gamma_R, H.shape)
        transmission.poles = np.linalg.eigvals(H - 0.5j * gsum)
    transmission.band = band
    return transmission


def current_landauer_continuum(
    transmission: Callable[[np.ndarray], np.ndarray],
    bias: BiasSpec,
    spec: QuadratureSpec | None = None,
    window: tuple[float, float] | None = None,
    breakpoints: Iterable[float] = (),
) -> CurrentResult:
    """Landauer current, integral of (f_L - f_R) T(w) / 2pi.

    The default window covers the bias window plus 40 k_B T on either side.
    """
    spec = spec or QuadratureSpec()
    if window is None:
        t = max(bias.T_L, bias.T_R)
        window = (min(bias.mu_L, bias.mu_R) - 40 * t, max(bias.mu_L, bias.mu_R) + 40 * t)
    pts = [bias.mu_L, bias.mu_R, *breakpoints]
    poles = getattr(transmission, "poles", None)
    if poles is not None:
        pts.extend(np.real(poles))
    band = getattr(transmission, "band", None)
    if band is not None:
        pts.extend(band)

    def integrand(w):
        df = fermi(w, bias.mu_L, bias.T_L) - fermi(w, bias.mu_R, bias.T_R)
        return df * transmission(w) / TWO_PI

    if window[1] <= window[0]:
        return CurrentResult(0.0, Method.LANDAUER_CONTINUUM, 0.0, 0, window)
    res = integrate_adaptive(integrand, window, spec, pts)
    return CurrentResult(float(res.value), Method.LANDAUER_CONTINUUM, res.abs_error, res.n_evaluations, window)


# --- dispatch and sweeps -------------------------------------------------------


def compute_current(
    junction: JunctionModel,
    bias: BiasSpec,
    method: Method | str,
    spec: QuadratureSpec | None = None,
    *,
    transmission: Callable | None = None,
) -> CurrentResult:
    """Evaluate one named method. ``transmission`` is needed only for the Landauer route."""
    from . import steadystate

    method = Method(method)
    if method is Method.GENERAL:
        return current_general(junction, bias, spec)
    if method is Method.NONINTERACTING:
        return current_noninteracting(junction, bias, spec)
    if method is Method.PC_INTEGRAL:
        return current_pc_integral(junction, bias, spec)
    if method is Method.PC_ANALYTIC:
        return current_pc_analytic(junction, bias)
    if method is Method.WEAK_GAMMA:
        return current_weak_gamma(junction, bias)
    if method is Method.STRONG_GAMMA:
        return current_strong_gamma(junction, bias)
    if method is Method.LANDAUER_CONTINUUM:
        if transmission is None:
            raise ErqtError("landauer_continuum needs a continuum transmission function")
        return current_landauer_continuum(transmission, bias, spec)
    if method is Method.LYAPUNOV:
        return steadystate.lyapunov_current(junction, bias)
    if method is Method.OCCUPANCY_LARGE_GAMMA:
        C = steadystate.solve_steady_c(steadystate.assemble_dynamics(junction, bias))
        occ = steadystate.occupations(C)[C.system_slice]
        return current_occupancy_large_gamma(junction, bias, occ)
    raise ErqtError(f"unknown method {method}")


@dataclass
class SweepRow:
    value: float
    results: dict[Method, CurrentResult | Exception] = field(default_factory=dict)


@dataclass
class SweepResult:
    parameter: str
    rows: list[SweepRow]

    def curve(self, method: Method | str) -> tuple[np.ndarray, np.ndarray]:
        """Parameter values and currents for one method; failed points are NaN."""
        method = Method(method)
        xs = np.array([r.value for r in self.rows])
        ys = np.array([
            r.results[method].value if isinstance(r.results.get(method), CurrentResult) else np.nan
            for r in self.rows
        ])
        return xs, ys


def kramers_sweep(
    junction: JunctionModel,
    bias: BiasSpec,
    gamma_scales: Iterable[float],
    methods: Sequence[Method | str] = (Method.PC_ANALYTIC,),
    spec: QuadratureSpec | None = None,
) -> SweepResult:
    """Scale every gamma_k by each factor and evaluate the requested methods.

    Failures are stored in the row instead of aborting the sweep.
    """
    methods = [Method(m) for m in methods]
    rows = []
    for s in gamma_scales:
        row = SweepRow(float(s))
        try:
            scaled = junction.scaled_gammas(float(s))
        except ErqtError as exc:
            row.results = {m: exc for m in methods}
            rows.append(row)
            continue
        for m in methods:
            try:
                row.results[m] = compute_current(scaled, bias, m, spec)
            except (ErqtError, QuadratureError) as exc:
                row.results[m] = exc
        rows.append(row)
    return SweepResult("gamma_scale", rows)
