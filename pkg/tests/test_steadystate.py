import numpy as np
import pytest
from conftest import random_bias, random_junction

from erqt import (
    BiasSpec,
    InvalidParameterError,
    JunctionModel,
    RelaxationKind,
    Reservoir,
    Side,
    UndampedSubspaceError,
    UnsupportedKindError,
    assemble_dynamics,
    current_from_c,
    lyapunov_current,
    occupations,
    propagate_transient,
    single_level,
    solve_steady_c,
    steadystate,
)
from erqt.steadystate import IllConditionedEigenbasisWarning


def kronecker_solve(A, Q):
    # vec(A C + C A^dag) = (I x A + conj(A) x I) vec(C), column-major vec
    n = A.shape[0]
    eye = np.eye(n)
    K = np.kron(eye, A) + np.kron(A.conj(), eye)
    c = np.linalg.solve(K, -Q.reshape(-1, order="F"))
    return c.reshape(n, n, order="F")


def test_benchmark_lyapunov_current():
    assert lyapunov_current(single_level(), BiasSpec(0.5, -0.5)).value == pytest.approx(0.05, rel=1e-13)


def test_matches_kronecker_oracle(rng):
    for _ in range(10):
        j = random_junction(rng, max_system=3, max_modes=12)
        dyn = assemble_dynamics(j, random_bias(rng))
        assert dyn.A.shape[0] <= 30
        C = solve_steady_c(dyn)
        np.testing.assert_allclose(C.C, kronecker_solve(dyn.A, dyn.Q), atol=1e-11)


def test_pauli_bounds_and_residual(rng):
    for _ in range(20):
        j = random_junction(rng)
        dyn = assemble_dynamics(j, random_bias(rng))
        C = solve_steady_c(dyn)
        np.testing.assert_allclose(C.C, C.C.conj().T, atol=0)
        ev = np.linalg.eigvalsh(C.C)
        assert ev.min() >= -1e-10 and ev.max() <= 1 + 1e-10
        residual = dyn.A @ C.C + C.C @ dyn.A.conj().T + dyn.Q
        assert np.max(np.abs(residual)) <= 1e-10 * np.max(np.abs(dyn.Q))


def test_filled_and_empty_reservoirs(rng):
    j = random_junction(rng)
    full = solve_steady_c(assemble_dynamics(j, BiasSpec(100.0, 100.0)))
    np.testing.assert_allclose(full.C, np.eye(full.C.shape[0]), atol=1e-10)
    empty = solve_steady_c(assemble_dynamics(j, BiasSpec(-100.0, -100.0)))
    np.testing.assert_allclose(empty.C, 0, atol=1e-12)


def test_current_is_conserved(rng):
    for _ in range(10):
        j = random_junction(rng)
        C = solve_steady_c(assemble_dynamics(j, random_bias(rng)))
        il = current_from_c(j, C, Side.L).value
        ir = current_from_c(j, C, "R").value
        assert il + ir == pytest.approx(0.0, abs=1e-12 * max(abs(il), 1e-3))


def test_occupations_are_real_and_bounded(rng):
    j = random_junction(rng)
    n = occupations(solve_steady_c(assemble_dynamics(j, BiasSpec(0.5, -0.5))))
    assert n.dtype == float and np.all((n >= -1e-12) & (n <= 1 + 1e-12))


def test_transient_relaxes_to_steady_state():
    j = single_level(gamma=0.5, v=0.2)
    dyn = assemble_dynamics(j, BiasSpec(0.5, -0.5))
    C_inf = solve_steady_c(dyn)
    dt = 0.05 / np.linalg.norm(dyn.A, 2)
    C_t = propagate_transient(dyn, np.zeros_like(dyn.A), 200.0, dt)
    np.testing.assert_allclose(C_t.C, C_inf.C, atol=1e-9)
    with pytest.raises(InvalidParameterError):
        propagate_transient(dyn, C_inf, 1.0, 1.0)


def test_schur_fallback_agrees(rng, monkeypatch):
    j = random_junction(rng, max_modes=10)
    dyn = assemble_dynamics(j, BiasSpec(0.3, -0.2, 0.05, 0.0))
    eig = solve_steady_c(dyn).C
    monkeypatch.setattr(steadystate, "EIG_COND_LIMIT", 0.0)
    with pytest.warns(IllConditionedEigenbasisWarning):
        schur = solve_steady_c(dyn).C
    np.testing.assert_allclose(schur, eig, atol=1e-12)


def test_decoupled_level_is_undamped():
    left = Reservoir([0.0], [0.2], [[0.1, 0.0]], Side.L)
    right = Reservoir([0.0], [0.2], [[0.1, 0.0]], Side.R)
    j = JunctionModel(np.diag([0.0, 0.3]), left, right)
    with pytest.raises(UndampedSubspaceError):
        solve_steady_c(assemble_dynamics(j, BiasSpec(0.5, -0.5)))


def test_nonmarkovian_rejected():
    with pytest.raises(UnsupportedKindError):
        assemble_dynamics(single_level(kind=RelaxationKind.NON_MARKOVIAN), BiasSpec(0.5, -0.5))


def test_layout_mismatch_rejected():
    C = solve_steady_c(assemble_dynamics(single_level(), BiasSpec(0.5, -0.5)))
    left = Reservoir([0.0, 1.0], [0.2, 0.2], [[0.1], [0.1]], Side.L)
    other = JunctionModel(np.zeros((1, 1)), left, left.with_label(Side.R))
    with pytest.raises(InvalidParameterError):
        current_from_c(other, C)
