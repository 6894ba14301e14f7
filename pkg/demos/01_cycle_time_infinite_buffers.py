"""Mean cycle time of a tandem with infinite buffers.

Three exponential servers behind a Poisson arrival stream.  The long-run
time between departures from the last server is the largest of the mean
interarrival and service times, whether or not the system is stable.
"""
from tandemq import (
    SystemSpec,
    closed_form_gamma,
    cycle_time_trace,
    estimate_gamma,
    exponential,
    run_recursion,
    sample_realization,
    throughput,
)

# %% The system: arrivals every 1.0 on average, servers with means 0.8, 1.25, 0.5
spec = SystemSpec.of([exponential(mean=m) for m in (1.0, 0.8, 1.25, 0.5)])
print("closed-form cycle time:", closed_form_gamma(spec))
print("throughput:", throughput(spec))

# %% One realization and its departure schedule.  D[i, n] is the n-th
# departure from station i; row 0 holds the arrival epochs.
tau = sample_realization(spec, n=6, seed=0)
D = run_recursion(tau)
print("\ndeparture epochs, first six customers:")
for i, row in enumerate(D):
    print(f"  station {i}:", " ".join(f"{x:7.3f}" for x in row[1:]))

# %% A long trajectory: D_M(n)/n settles near 1.25
n, gamma_hat = cycle_time_trace(sample_realization(spec, n=200_000, seed=1))
for k in (10, 100, 1_000, 10_000, 100_000, 200_000):
    print(f"  n={k:>7}  D_M(n)/n = {gamma_hat[k - 1]:.4f}")

# %% Replicated estimate with a 95% interval
est = estimate_gamma(spec, n=200_000, replications=20, seed=0)
lo, hi = est.interval
print(f"\nestimate {est.point:.4f}  95% CI [{lo:.4f}, {hi:.4f}]")

# %% An overloaded single server: arrivals twice as fast as service.
# The queue grows without bound, yet departures still come every 2.0 on average.
overloaded = SystemSpec.of([exponential(rate=2.0), exponential(rate=0.5)])
print("overloaded server:", estimate_gamma(overloaded, n=100_000, replications=10).point)
