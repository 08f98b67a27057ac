import numpy as np
import pytest
from conftest import random_bias, random_junction

from erqt import (
    BiasSpec,
    NonInteractingProvider,
    NotProportionalError,
    QuadratureSpec,
    RelaxationKind,
    ReservoirMode,
    Side,
    delta_gamma_tilde,
    integrate_adaptive,
    self_energy_r,
    single_level,
    spectral_densities,
    system_ga,
    system_glesser,
    system_gr,
)
from erqt.greens import mode_ga, mode_glesser, mode_gr, pole_estimates
from erqt.model import f_tilde
from erqt.steadystate import assemble_dynamics, solve_steady_c


def _dag(a):
    return np.swapaxes(a.conj(), -1, -2)


def test_benchmark_gr_at_mode_pole():
    j = single_level()
    assert system_gr(j, 0.1j)[0, 0] == pytest.approx(-5j, abs=1e-15)


@pytest.mark.parametrize("kind", list(RelaxationKind))
def test_mode_lesser_identity(rng, kind):
    # g^< = -f~ (g^r - g^a) for an isolated relaxed mode
    for _ in range(1000):
        mode = ReservoirMode(rng.uniform(-2, 2), np.exp(rng.uniform(-5, 1)), np.array([1.0]))
        bias = random_bias(rng)
        w = rng.uniform(-3, 3)
        side = Side.L if rng.integers(2) else Side.R
        lhs = mode_glesser(mode, w, side, bias, kind)
        rhs = -f_tilde(mode, w, side, bias, kind) * (mode_gr(mode, w) - mode_ga(mode, w))
        assert abs(lhs - rhs) <= 1e-14 * max(abs(lhs), abs(rhs), 1e-300)


def test_spectral_function_identity(rng):
    # G^r - G^a = -i G^r (Gamma_L + Gamma_R) G^a
    for _ in range(100):
        j = random_junction(rng)
        w = rng.uniform(-3, 3, 1)
        Gr = system_gr(j, w)
        sd = spectral_densities(j, w, BiasSpec(0.0, 0.0))
        lhs = Gr - _dag(Gr)
        rhs = -1j * Gr @ (sd.gamma_L + sd.gamma_R) @ _dag(Gr)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(lhs))


def test_gamma_is_minus_two_im_sigma(rng):
    j = random_junction(rng)
    w = np.linspace(-2, 2, 7)
    sigma = self_energy_r(j, w)
    sd = spectral_densities(j, w, BiasSpec(0.0, 0.0))
    np.testing.assert_allclose(1j * (sigma - _dag(sigma)), sd.gamma_L + sd.gamma_R, atol=1e-14)


def test_gamma_tilde_bounds(rng):
    # 0 <= Gamma~ <= Gamma as matrices
    j = random_junction(rng)
    bias = BiasSpec(0.3, -0.2, 0.05, 0.5)
    for kind in RelaxationKind:
        sd = spectral_densities(j, np.linspace(-2, 2, 9), bias, kind)
        for g, gt in ((sd.gamma_L, sd.gamma_tilde_L), (sd.gamma_R, sd.gamma_tilde_R)):
            assert np.min(np.linalg.eigvalsh(gt)) >= -1e-14
            assert np.min(np.linalg.eigvalsh(g - gt)) >= -1e-14


def test_ga_is_adjoint_and_provider_matches(rng):
    j = random_junction(rng)
    w = np.array([-0.4, 0.0, 1.3])
    np.testing.assert_allclose(system_ga(j, w), _dag(system_gr(j, w)))
    np.testing.assert_allclose(NonInteractingProvider(j)(w), system_gr(j, w))
    assert system_gr(j, 0.2).shape == (j.n_system, j.n_system)


def test_gr_is_analytic_in_upper_half_plane(rng):
    # Cauchy integral over a circle in the upper half-plane reproduces G^r at the center
    j = random_junction(rng, max_modes=10)
    center, radius = 0.1 + 0.8j, 0.5
    theta = 2 * np.pi * np.arange(256) / 256
    z = center + radius * np.exp(1j * theta)
    G = system_gr(j, z)
    # dz = i r e^{i theta} d theta, so (1/2 pi i) int G/(z-c) dz = mean(G)
    np.testing.assert_allclose(G.mean(axis=0), system_gr(j, center), atol=1e-12)


def test_poles_lie_in_lower_half_plane(rng):
    for _ in range(20):
        assert np.all(pole_estimates(random_junction(rng)).imag < 0)


def test_fast_path_self_energy_matches(rng):
    j = random_junction(rng, proportional=True)
    z = np.array([0.3 + 0.01j, -1.0 + 0.2j])
    np.testing.assert_allclose(self_energy_r(j, z, proportional_fast_path=True), self_energy_r(j, z), atol=1e-14)
    with pytest.raises(NotProportionalError):
        self_energy_r(random_junction(rng, proportional=False), z, proportional_fast_path=True)


def test_delta_gamma_tilde_needs_proportional(rng):
    j = random_junction(rng, proportional=True)
    bias = BiasSpec(0.5, -0.5, 0.05, 0.05)
    lam = (np.sum(np.abs(j.right.v) ** 2) / np.sum(np.abs(j.left.v) ** 2))
    w = np.linspace(-1, 1, 5)
    sd = spectral_densities(j, w, bias)
    # Gamma~_L - Gamma~_R / lam is the left-mode sum weighted by f~_L - f~_R
    np.testing.assert_allclose(delta_gamma_tilde(j, w, bias), sd.gamma_tilde_L - sd.gamma_tilde_R / lam, atol=1e-13)
    with pytest.raises(NotProportionalError):
        delta_gamma_tilde(random_junction(rng, proportional=False), w, bias)


def test_integrated_lesser_matches_steady_state_occupations():
    # -i int G^< dw / 2 pi equals the system block of the correlation matrix (transposed)
    rng = np.random.default_rng(7)
    j = random_junction(rng, max_system=2, max_modes=4)
    bias = BiasSpec(0.4, -0.3, 0.1, 0.0)
    C = solve_steady_c(assemble_dynamics(j, bias))
    ns = j.n_system
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-11, max_subdivisions=20000)
    poles = pole_estimates(j)
    pts = [bias.mu_L, bias.mu_R, *poles.real]
    out = np.zeros((ns, ns), complex)
    for a in range(ns):
        for b in range(ns):
            def f(w, a=a, b=b):
                return -1j * system_glesser(j, w, bias)[:, a, b] / (2 * np.pi)
            # the integrand decays as w^-4, so the truncated window costs < 1e-10
            out[a, b] = integrate_adaptive(f, (-2000.0, 2000.0), spec, pts).value
    np.testing.assert_allclose(out.T, C.C[C.system_slice, C.system_slice], atol=1e-9)
