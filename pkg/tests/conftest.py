import numpy as np
import pytest

from erqt import (
    BiasSpec,
    JunctionModel,
    RelaxationKind,
    Reservoir,
    Side,
    make_proportional_right,
)


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T) / np.sqrt(2 * n)


def random_reservoir(rng, n_modes, n_system, side=Side.L, *, band=2.0, gamma_range=(0.05, 0.5), coupling=0.15):
    omega = rng.uniform(-band, band, n_modes)
    gamma = np.exp(rng.uniform(*np.log(gamma_range), n_modes))
    v = coupling * (rng.normal(size=(n_modes, n_system)) + 1j * rng.normal(size=(n_modes, n_system))) / np.sqrt(2)
    return Reservoir(omega, gamma, v, side)


def random_junction(rng, *, proportional=None, kind=RelaxationKind.MARKOVIAN, max_system=4, max_modes=40):
    """Random non-interacting junction; proportional coupling with probability 1/2 by default."""
    ns = int(rng.integers(1, max_system + 1))
    H = random_hermitian(rng, ns)
    left = random_reservoir(rng, int(rng.integers(1, max_modes + 1)), ns, Side.L)
    if proportional is None:
        proportional = bool(rng.integers(2))
    if proportional:
        right = make_proportional_right(left, float(rng.uniform(0.2, 3.0)))
    else:
        right = random_reservoir(rng, int(rng.integers(1, max_modes + 1)), ns, Side.R)
    return JunctionModel(H, left, right, kind)


def random_bias(rng, temperatures=(0.0, 0.05, 0.5)):
    mu_l, mu_r = rng.uniform(-1.0, 1.0, 2)
    return BiasSpec(float(mu_l), float(mu_r), float(rng.choice(temperatures)), float(rng.choice(temperatures)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
