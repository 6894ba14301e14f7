"""Two servers with no waiting room in front of the second one.

Compares the manufacturing and communication blocking rules with the
infinite-buffer tandem on the same random input.
"""
import numpy as np

from tandemq import (
    SystemSpec,
    closed_form_gamma,
    estimate_gamma,
    exponential,
    gamma,
    run_blocking_recursion,
    run_recursion,
    sample_realization,
    sandwich_D1,
)
from tandemq.analysis import closed_form_gamma_with_error

stations = [exponential(mean=1.0), exponential(rate=1.0), exponential(rate=1.0)]

# %% Closed forms: max(E t0, E max(t1, t2)) and max(E t0, E t1 + E t2)
for discipline in ("infinite", "manufacturing", "communication"):
    spec = SystemSpec.of(stations, discipline=discipline)
    est = estimate_gamma(spec, n=100_000, replications=20, seed=0)
    print(f"{discipline:>13}: closed form {closed_form_gamma(spec):.4f}   simulated {est.point:.4f}")

# %% Same realization, three disciplines.  Blocking can only delay departures.
tau = sample_realization(SystemSpec.of(stations), n=10, seed=3)
print("\nlast-server departures")
print("  infinite      ", np.round(run_recursion(tau)[2, 1:], 2))
print("  manufacturing ", np.round(run_blocking_recursion(tau, "manufacturing")[2, 1:], 2))
print("  communication ", np.round(run_blocking_recursion(tau, "communication")[2, 1:], 2))

# %% Bracketing D1(n) under manufacturing blocking
D1 = run_blocking_recursion(tau, "manufacturing")[1]
for n in (1, 5, 9):
    lo, hi = sandwich_D1(tau, n)
    print(f"  n={n}: {lo:.3f} <= D1(n)={D1[n]:.3f} <= {hi:.3f}")

# %% No closed form for E max(gamma, exponential): it is sampled, with its error
spec = SystemSpec.of([exponential(mean=1.0), gamma(2.0, 0.6), exponential(rate=1.0)],
                     discipline="manufacturing")
value, err = closed_form_gamma_with_error(spec)
print(f"\nmanufacturing with gamma server: {value:.4f} +/- {err:.4f}")
