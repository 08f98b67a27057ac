"""Spurious equilibrium current from Markovian relaxation.

Markovian damping fills each mode according to its own energy and only then
broadens it. When the left and right reservoirs differ, the broadened
occupations no longer form a single Fermi function. A current then flows
even at equal chemical potentials and temperatures. Non-Markovian damping
(occupation set at the probe frequency) and proportional coupling both remove it.
"""

import numpy as np

from erqt import (
    BiasSpec,
    JunctionModel,
    Reservoir,
    Side,
    current_general,
    lyapunov_current,
    single_level,
)

left = Reservoir([-0.3], [0.4], [[0.2]], Side.L)
right = Reservoir([0.25], [0.1], [[0.1]], Side.R)
asymmetric = JunctionModel(np.array([[0.05]]), left, right)

print(f"{'T':>6}{'Markovian':>14}{'(Lyapunov)':>14}{'non-Markovian':>16}{'proportional':>15}")
for T in (0.0, 0.05, 0.2, 1.0):
    eq = BiasSpec(0.2, 0.2, T, T)
    mk = current_general(asymmetric, eq).value
    ly = lyapunov_current(asymmetric, eq).value
    nm = current_general(asymmetric.with_kind("nonmarkovian"), eq).value
    pc = current_general(single_level(0.05, lam=2.0), eq).value
    print(f"{T:>6.2f}{mk:>14.3e}{ly:>14.3e}{nm:>16.1e}{pc:>15.1e}")
