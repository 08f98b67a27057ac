"""The correlation matrix: transient, steady state and strong damping.

The single-particle correlation matrix C evolves as
dC/dt = A C + C A^dag + Q. Integrating from an empty junction converges to
the Lyapunov steady state. At large relaxation rates the current follows
from the system occupations alone, and that approximation improves as 1/s^2.
"""

import numpy as np

from erqt import (
    BiasSpec,
    Method,
    Side,
    assemble_dynamics,
    compute_current,
    current_from_c,
    propagate_transient,
    single_level,
    solve_steady_c,
)

junction = single_level(gamma=0.5, v=0.2)
bias = BiasSpec(0.5, -0.5)
dyn = assemble_dynamics(junction, bias)
steady = solve_steady_c(dyn)
print(f"steady state: I = {current_from_c(junction, steady).value:.8f}, system occupation {steady.C[1, 1].real:.6f}")

dt = 0.05 / np.linalg.norm(dyn.A, 2)
C = np.zeros_like(dyn.A)
t = 0.0
for t_next in (5, 10, 20, 40, 80):
    C = propagate_transient(dyn, C, t_next - t, dt).C
    t = t_next
    state = type(steady)(C, steady.n_left, steady.n_system, steady.n_right)
    il, ir = current_from_c(junction, state, Side.L).value, current_from_c(junction, state, Side.R).value
    print(f"t = {t:>3}: I_L = {il:+.8f}, I_R = {ir:+.8f}, |C - C_ss| = {np.max(np.abs(C - steady.C)):.2e}")

print("\nlarge-gamma occupancy identity")
bench = single_level()
for s in (1e1, 1e2, 1e3, 1e4):
    js = bench.scaled_gammas(s)
    ly = compute_current(js, bias, Method.LYAPUNOV).value
    oc = compute_current(js, bias, Method.OCCUPANCY_LARGE_GAMMA).value
    print(f"s = {s:>7.0e}: lyapunov {ly:.6e}, occupancy {oc:.6e}, rel. diff {abs(ly - oc) / ly:.2e}")
