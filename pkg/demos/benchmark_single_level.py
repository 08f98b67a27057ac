"""Every current route on the simplest junction.

One level at zero energy couples to a single relaxed mode on each side
(mode at 0, gamma = 0.2, coupling 0.1, identical left and right). With the
whole Lorentzian inside the bias window the closed form is

    G^r(i gamma/2) = 1 / (i gamma/2 - 2 v^2/(i gamma)) = -5i
    I = 2 lam/(1+lam) * v^2 * 5 = 0.05

and every route should reproduce it.
"""

import time

from erqt import BiasSpec, Method, compute_current, single_level

junction = single_level(0.0, gamma=0.2, v=0.1, lam=1.0)
bias = BiasSpec(mu_L=0.5, mu_R=-0.5)

print(f"{'method':<16}{'current':>22}{'error est.':>12}{'evals':>8}{'ms':>8}")
for method in (Method.PC_ANALYTIC, Method.PC_INTEGRAL, Method.NONINTERACTING, Method.GENERAL, Method.LYAPUNOV):
    t0 = time.perf_counter()
    res = compute_current(junction, bias, method)
    ms = 1e3 * (time.perf_counter() - t0)
    print(f"{method.value:<16}{res.value:>22.17f}{res.abs_error_estimate:>12.1e}{res.n_evaluations:>8d}{ms:>8.2f}")

# Non-Markovian relaxation lets each mode follow the Fermi function at the
# probe frequency, so the tails of the Lorentzian outside the window drop out.
nm = compute_current(junction.with_kind("nonmarkovian"), bias, Method.GENERAL)
print(f"\nnon-Markovian relaxation: I = {nm.value:.10f}")
