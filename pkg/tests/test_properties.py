import numpy as np
from conftest import random_hermitian, random_reservoir
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from erqt import (
    BiasSpec,
    JunctionModel,
    Side,
    fermi,
    lyapunov_current,
    make_proportional_right,
    system_gr,
)
from erqt.config import dump_config, parse_config
from erqt.current import current_pc_analytic

finite = st.floats(-3, 3, allow_nan=False)
temps = st.sampled_from([0.0, 0.01, 0.05, 0.5])


@st.composite
def pc_junctions(draw):
    # generic couplings with at least as many modes as sites, so no level is dark
    ns = draw(st.integers(1, 3))
    k = draw(st.integers(ns, 6))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    left = random_reservoir(rng, k, ns, Side.L, gamma_range=(0.01, 2.0), coupling=0.3)
    lam = draw(st.floats(0.1, 5.0))
    return JunctionModel(random_hermitian(rng, ns, 2.0), left, make_proportional_right(left, lam))


@given(finite, finite, temps)
def test_fermi_bounded(w, mu, T):
    f = fermi(w, mu, T)
    assert 0.0 <= f <= 1.0


@given(arrays(float, 20, elements=finite), finite, temps)
def test_fermi_monotone(w, mu, T):
    f = fermi(np.sort(w), mu, T)
    assert np.all(np.diff(f) <= 0)


@settings(max_examples=50, deadline=None)
@given(pc_junctions(), finite)
def test_spectral_function_is_positive(j, w):
    G = system_gr(j, w)
    A = 1j * (G - G.conj().T)
    assert np.min(np.linalg.eigvalsh(A)) >= -1e-10 * max(np.max(np.abs(A)), 1.0)


@settings(max_examples=50, deadline=None)
@given(pc_junctions(), finite, st.floats(0.0, 2.0), temps)
def test_pc_current_follows_bias_and_matches_lyapunov(j, mu_r, delta, T):
    bias = BiasSpec(mu_r + delta, mu_r, T, T)
    analytic = current_pc_analytic(j, bias).value
    assert analytic >= -1e-15
    lyap = lyapunov_current(j, bias).value
    scale = np.sum(np.abs(j.left.v) ** 2 * j.left.gamma[:, None]) + 1e-300
    assert abs(analytic - lyap) <= 1e-8 * abs(analytic) + 1e-10 * scale


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-2, 2), st.floats(0.01, 5), st.floats(-1, 1), st.floats(-1, 1), temps,
    st.lists(st.sampled_from(["general", "noninteracting", "lyapunov", "pc_integral"]), min_size=1, max_size=4, unique=True),
)
def test_config_dump_round_trip(omega, gamma, mu_l, mu_r, T, methods):
    text = f"""
scenario: prop
system: {{preset: single-level, epsilon: {omega!r}}}
reservoirs:
  left:
    modes: [{{omega: {omega!r}, gamma: {gamma!r}, coupling: [[0.1, 0.02]]}}]
  right:
    proportional: {{lambda: 2.0}}
bias: {{mu_L: {mu_l!r}, mu_R: {mu_r!r}, T_L: {T!r}}}
run:
  methods: {methods}
"""
    cfg = parse_config(text)
    assert parse_config(dump_config(cfg)) == cfg
