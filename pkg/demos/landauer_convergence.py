"""Finite reservoirs approaching the continuum.

A flat band of half-width W = 2 with broadening 0.05 is cut into N modes per
side. Each mode relaxes at a rate equal to the mode spacing 2W/N. As N grows,
the extended-reservoir current approaches the Landauer value

    I = (1/2pi) G_L G_R (2/G) [atan(2 mu_L/G) - atan(2 mu_R/G)],  G = G_L + G_R.
"""

import numpy as np

from erqt import (
    BiasSpec,
    JunctionModel,
    continuum_transmission,
    current_landauer_continuum,
    current_pc_analytic,
    discretize_band,
    lyapunov_current,
    make_proportional_right,
    wide_band_matrix,
)

W, gamma0 = 2.0, 0.05
bias = BiasSpec(0.5, -0.5)

T = continuum_transmission(np.zeros((1, 1)), wide_band_matrix(gamma0), wide_band_matrix(gamma0), band=(-W, W))
landauer = current_landauer_continuum(T, bias).value
G = 2 * gamma0
closed = gamma0**2 * (2 / G) * (np.arctan(2 * bias.mu_L / G) - np.arctan(2 * bias.mu_R / G)) / (2 * np.pi)
print(f"Landauer: quadrature {landauer:.12f}, arctan form {closed:.12f}\n")

print(f"{'N':>5}{'pc_analytic':>16}{'lyapunov':>16}{'rel. dev.':>12}")
for n in (8, 16, 32, 64, 128, 256):
    left = discretize_band(gamma0, (-W, W), n, gamma=1.0, gamma_rule="spacing")
    junction = JunctionModel(np.zeros((1, 1)), left, make_proportional_right(left, 1.0))
    pc = current_pc_analytic(junction, bias).value
    ly = lyapunov_current(junction, bias).value if n <= 128 else float("nan")
    print(f"{n:>5d}{pc:>16.10f}{ly:>16.10f}{abs(pc - landauer) / landauer:>12.4%}")
