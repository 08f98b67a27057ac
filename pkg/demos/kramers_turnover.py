"""Current versus relaxation strength.

Scaling every gamma_k by s interpolates between two regimes. For weak
relaxation the modes cannot refill fast enough and I ~ gamma. For strong
relaxation the modes broaden past the level and I ~ 1/gamma. For the
benchmark junction the exact curve is

    I(g) = 0.01 / (g/2 + 0.02/g),    g = 0.2 s,

which peaks at s = 1.
"""

import numpy as np

from erqt import BiasSpec, Method, kramers_sweep, single_level

junction = single_level()
bias = BiasSpec(0.5, -0.5)
scales = np.logspace(-3, 3, 13)
methods = (Method.PC_ANALYTIC, Method.LYAPUNOV, Method.WEAK_GAMMA, Method.STRONG_GAMMA)
sweep = kramers_sweep(junction, bias, scales, methods=methods)

print(f"{'s':>9}" + "".join(f"{m.value:>16}" for m in methods) + f"{'exact':>16}")
for row in sweep.rows:
    g = 0.2 * row.value
    cells = "".join(f"{row.results[m].value:>16.6e}" for m in methods)
    print(f"{row.value:>9.3g}{cells}{0.01 / (g / 2 + 0.02 / g):>16.6e}")

s, current = sweep.curve(Method.PC_ANALYTIC)
print(f"\nmaximum at s = {s[np.argmax(current)]:.3g}, I = {current.max():.6f}")
