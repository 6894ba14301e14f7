"""How fast D_M(n)/n approaches its limit.

The analytic bracket on E[D_M(n)]/n narrows like n^-1/2; the observed error
of a simulation shrinks at least that fast.
"""
import math

from tandemq import MomentSummary, SystemSpec, exponential, lemma5_bound, theorem7_sandwich
from tandemq.analysis import convergence_study

spec = SystemSpec.of([exponential(1.0)] * 3)
moments = [MomentSummary.of(s) for s in spec.stations]

# %% The bracket and its per-term breakdown
for n in (10**2, 10**4, 10**6):
    rep = theorem7_sandwich(n, moments)
    print(f"n={n:>8}  [{rep.lower:.4f}, {rep.upper:.4f}]  width*sqrt(n)={rep.width * math.sqrt(n):.3f}")
print("components at n=1e6:", theorem7_sandwich(10**6, moments).components)

# %% Simulated error next to the bracket width
print("\n       n   mean|error|   bracket width")
for row in convergence_study(spec, [10**2, 10**3, 10**4, 10**5], replications=50, seed=9):
    print(f"{row.n:>8}   {row.mean_abs_error:.5f}       {row.sandwich_width:.5f}")

# %% The maximum bound is exact for two uniforms on [0, 1]
print("\nbound on E max of two U(0,1):", lemma5_bound(2, 0.5, 1 / 12), "(exact: 2/3)")
