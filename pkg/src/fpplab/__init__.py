"""Shortest-path experiments on the complete graph with heavy-tailed
edge weights.

The package has five layers. ``theory`` holds closed-form quantities,
``numerics`` evaluates the same laws by quadrature so the two can be
checked against each other, ``simulate`` draws actual graphs and runs the
shortest-path algorithm, ``stats`` turns samples into test reports, and
``cli`` exposes everything as commands. ``validation`` wires the layers
into the acceptance suites.
"""
from .errors import (
    DomainError,
    InsufficientSampleError,
    InversionError,
    LabError,
    QuadratureError,
    UnsupportedPathLengthError,
    ZeroVarianceError,
)
from .numerics import (
    DEFAULT_SPEC,
    QuadratureSpec,
    hop_split_probability,
    log_cdf,
    log_joint_cdf,
    min_quantile,
    min_quantile_many,
)
from .simulate import (
    CountResult,
    PathResult,
    WeightModel,
    count_paths_below,
    edge_weight,
    min_two_edge,
    multipoint_weights,
    replication_seed,
    sample_min_independent,
    sample_min_independent_many,
    sample_weight_sum,
    sample_weight_sums,
    shortest_path,
    weight_stream,
)
from .stats import (
    ExperimentRecord,
    TestReport,
    hop_histogram,
    ks_against_gumbel,
    make_record,
    pairwise_correlation,
    poisson_count_test,
)
from .theory import (
    Disorder,
    PoissonCondition,
    centering_value,
    correlated_tail_exponent,
    gumbel_sf,
    limit_hops,
    near_tie,
    poisson_condition,
    standardize_weight,
    tail_coefficient,
    tail_log_cdf,
    tie_point,
    weight_scale,
)
from .validation import MASTER_SEED, SUITES, run_all, run_suite

__version__ = "1.0.0"

__all__ = [
    "CountResult",
    "DEFAULT_SPEC",
    "Disorder",
    "DomainError",
    "ExperimentRecord",
    "InsufficientSampleError",
    "InversionError",
    "LabError",
    "MASTER_SEED",
    "PathResult",
    "PoissonCondition",
    "QuadratureError",
    "QuadratureSpec",
    "SUITES",
    "TestReport",
    "UnsupportedPathLengthError",
    "WeightModel",
    "ZeroVarianceError",
    "centering_value",
    "correlated_tail_exponent",
    "count_paths_below",
    "edge_weight",
    "gumbel_sf",
    "hop_histogram",
    "hop_split_probability",
    "ks_against_gumbel",
    "limit_hops",
    "log_cdf",
    "log_joint_cdf",
    "make_record",
    "min_quantile",
    "min_quantile_many",
    "min_two_edge",
    "multipoint_weights",
    "near_tie",
    "pairwise_correlation",
    "poisson_condition",
    "poisson_count_test",
    "replication_seed",
    "run_all",
    "run_suite",
    "sample_min_independent",
    "sample_min_independent_many",
    "sample_weight_sum",
    "sample_weight_sums",
    "shortest_path",
    "standardize_weight",
    "tail_coefficient",
    "tail_log_cdf",
    "tie_point",
    "weight_scale",
    "__version__",
]
