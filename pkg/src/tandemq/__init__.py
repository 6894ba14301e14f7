"""Cycle time of tandem single-server queues: recursions, formulas and bounds."""

__version__ = "0.1.0"

from .analysis import (
    ConvergenceRow,
    CycleTimeEstimate,
    closed_form_gamma,
    closed_form_gamma_with_error,
    convergence_study,
    estimate_gamma,
    throughput,
)
from .blocking import (
    BlockingRule,
    blocking_cycle_time,
    communication_explicit_D2,
    manufacturing_explicit_D1,
    run_blocking_recursion,
    sandwich_D1,
)
from .bounds import (
    BoundReport,
    MomentSummary,
    lemma4_bound,
    lemma5_bound,
    lemma6_bound,
    theorem7_sandwich,
)
from .core import cycle_time_trace, explicit_solution, run_recursion, zeta, zeta_table
from .distributions import (
    DependenceMode,
    DistributionSpec,
    bernoulli_scaled,
    deterministic,
    exact_mean,
    exact_mean_pairwise_max,
    exact_variance,
    exponential,
    gamma,
    sample_realization,
    uniform,
)
from .system import Discipline, SystemSpec
