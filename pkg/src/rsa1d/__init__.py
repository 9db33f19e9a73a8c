"""Exact results and high-throughput simulation for one-dimensional random
sequential adsorption with nearest-neighbor exclusion."""

from .analytic import (
    SeriesValue,
    b_run_prob,
    correlation_exact,
    density_exact,
    g_event_prob,
    gamma_component,
    gamma_even_exact,
    h_pair_prob,
    i_k,
    s1_s2_identity,
    tail_sum,
    telescope_partial,
)
from .errors import ResourceLimitError
from .montecarlo import (
    Estimate,
    GammaEstimate,
    SimConfig,
    run_correlation_mc,
    run_density_mc,
    run_gamma_mc,
)
from .oracle import (
    PatternSpec,
    exact_center_density,
    exact_gamma,
    exact_pattern_prob,
    window_truncation_bound,
)
from .simulate import (
    ArrivalField,
    Occupancy,
    RunLengths,
    chronological_fill,
    compute_runs,
    run_parity_fill,
)
from .verify import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "ArrivalField",
    "CheckResult",
    "Estimate",
    "GammaEstimate",
    "Occupancy",
    "PatternSpec",
    "ResourceLimitError",
    "RunLengths",
    "SeriesValue",
    "SimConfig",
    "b_run_prob",
    "chronological_fill",
    "compute_runs",
    "correlation_exact",
    "density_exact",
    "exact_center_density",
    "exact_gamma",
    "exact_pattern_prob",
    "g_event_prob",
    "gamma_component",
    "gamma_even_exact",
    "h_pair_prob",
    "i_k",
    "run_checks",
    "run_correlation_mc",
    "run_density_mc",
    "run_gamma_mc",
    "run_parity_fill",
    "s1_s2_identity",
    "tail_sum",
    "telescope_partial",
    "window_truncation_bound",
    "__version__",
]
