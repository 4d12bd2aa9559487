"""Antichains in the Boolean lattice and its random subfamilies.

Exact maximum-antichain solving via Dilworth duality, edge-minimality
oracles, a two-phase container decomposition, seeded Monte Carlo
experiments around the p = c/n threshold, exact small-n censuses, and
log-space union-bound arithmetic.  The `spernerlab` command line wires
everything together; see the README for the tour.
"""

from .bounds import (
    BoundReport,
    chernoff_log_bound,
    log_central_binom,
    small_binom_sum_log,
    union_bound_report,
)
from .containers import (
    CensusItem,
    CensusSummary,
    ContainerParams,
    ContainerResult,
    TraceStep,
    build_containers,
    check_invariants,
    container_census,
    verify_idempotence,
)
from .enumeration import (
    AntichainCensus,
    census,
    greedy_middle_layers,
    proposition_bracket,
)
from .errors import (
    ConstructionError,
    FeasibilityError,
    InvariantViolation,
    PreconditionError,
    SpernerlabError,
)
from .experiments import (
    SampleConfig,
    ThresholdExperimentRow,
    sample_power_set,
    threshold_experiment,
    window_experiment_t,
)
from .kleitman import (
    DensityBoundParams,
    density_lower_bound,
    kleitman_min_edges,
    verify_kleitman_exhaustive,
    verify_kleitman_randomized,
)
from .lattice import (
    CentralityOrder,
    VertexSet,
    centrality_order,
    comparable,
    induced_edges,
    initial_segment,
    layer_vertex_set,
    read_vertex_set,
    write_vertex_set,
)
from .solver import (
    MatchingWitness,
    is_antichain,
    max_antichain_bruteforce,
    max_antichain_exact,
)

__version__ = "0.1.0"

__all__ = [
    "AntichainCensus",
    "BoundReport",
    "CensusItem",
    "CensusSummary",
    "CentralityOrder",
    "ConstructionError",
    "ContainerParams",
    "ContainerResult",
    "DensityBoundParams",
    "FeasibilityError",
    "InvariantViolation",
    "MatchingWitness",
    "PreconditionError",
    "SampleConfig",
    "SpernerlabError",
    "ThresholdExperimentRow",
    "TraceStep",
    "VertexSet",
    "build_containers",
    "census",
    "centrality_order",
    "chernoff_log_bound",
    "check_invariants",
    "comparable",
    "container_census",
    "density_lower_bound",
    "greedy_middle_layers",
    "induced_edges",
    "initial_segment",
    "is_antichain",
    "kleitman_min_edges",
    "layer_vertex_set",
    "log_central_binom",
    "max_antichain_bruteforce",
    "max_antichain_exact",
    "proposition_bracket",
    "read_vertex_set",
    "sample_power_set",
    "small_binom_sum_log",
    "threshold_experiment",
    "union_bound_report",
    "verify_idempotence",
    "verify_kleitman_exhaustive",
    "verify_kleitman_randomized",
    "window_experiment_t",
    "write_vertex_set",
    "__version__",
]
