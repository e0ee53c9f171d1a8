"""Exact by-row sum laws of non-stationary Bernoulli and corrected-geometric
triangular arrays, the functionals that govern their Poisson limits, and
numerical convergence diagnostics."""

from .distributions import (
    CellLaw,
    Kind,
    Pmf,
    RowMoments,
    bernoulli_pmf,
    binomial_pmf,
    corrected_geometric_pmf,
    negative_binomial_shifted_pmf,
    poisson_pmf,
    row_moments,
    sample_cell,
)
from .schedules import (
    Generator,
    RowSchedule,
    ScheduleError,
    ScheduleFamily,
    ScheduleParseError,
    emit_schedule,
    generate_row,
    parse_schedule,
)
from .sums import (
    KindMismatchError,
    Method,
    SumLaw,
    geometric_sum,
    poisson_binomial,
    poisson_binomial_cf,
    row_sum_law,
    tail_probability,
)
from .conditions import (
    ConditionReport,
    SpectralMeasure,
    b_functional_bernoulli,
    b_functional_geometric,
    evaluate_K,
    lindeberg_gauss,
    lindeberg_poisson,
    mean_sum,
    mv,
    spectral_measure,
    theorem_verdict,
    uan,
)
from .charfn import CfGrid, cell_cf, cf_distance, levy_exponent, poisson_cf, row_cf
from .rng import CounterStream
from .validation import (
    ConvergenceTrace,
    convergence_trace,
    kolmogorov_distance,
    simulate_row_sum,
    tv_distance,
)
from .kernels import BACKEND

__version__ = "0.1.0"
