"""Parallel-update sorting dynamics on {0,1,2}-strings.

Exact dynamics and landmark analysis for finite strings, first-passage
laws of the embedded biased walk, reproducible sampling, and Monte
Carlo experiments against the limit laws.
"""

from .core import (
    StabilizationOutcome,
    excess,
    is_sorted_nonincreasing,
    project,
    sorting_time_two,
    stabilize_three,
    stabilize_two,
    step_three,
    step_two,
)
from .landmarks import (
    LandmarkSet,
    PhaseTrace,
    check_excess_gt_one_implies_tail,
    height_profile,
    landmarks,
    predict_zero_excess,
    track_phases,
    u_position_cdf,
)
from .walk import (
    ExcursionRecord,
    WalkParams,
    conditional_hit_expectation,
    conditional_hit_probability,
    enumerate_hitting_oracle,
    escape_probability,
    excursion_record_from_heights,
    hitting_gf,
    hitting_pmf,
    hitting_tail,
    reversed_reflected_heights,
    simulate_excursion_chain,
)
from .sampling import (
    critical_density,
    sample_three_with_scp,
    sample_two,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    estimate_mk_gap,
    exact_excess_distribution,
    run_excess_experiment,
    run_stabilization_experiment,
)
from .reference import (
    ReferenceLaw,
    ks_statistic,
    reference_cdf,
    simulate_brownian_functional,
)

__version__ = "0.1.0"
