"""Random geometric graphs on exponential point clouds: sampling, l-inf
neighbor search, degree statistics, closed-form bounds, and seeded
verification experiments."""

from .model import (
    DegreeSummary,
    EdgeDistanceFamily,
    LogRegime,
    PointCloud,
    PowerFamily,
    RggConfig,
    TheoryBounds,
)
from .sampling import (
    SeedDerivation,
    derive_replication_seed,
    exponential_inverse_cdf,
    read_cloud,
    sample_exponential_cloud,
    uniform_stream,
    write_cloud,
)
from .spatial import (
    GridIndex,
    brute_force_edges,
    build_grid_index,
    linf_distance,
    neighbors_within,
)
from .graphstats import degree_ratios, degree_summary, edge_density_gap
from .theory import (
    a_max,
    a_min,
    chernoff_lower_tail,
    chernoff_upper_tail,
    containment_radius,
    edge_distance,
    h_function,
    pair_connect_prob,
    series_classifier,
    theory_bounds,
)
from .experiments import (
    ExperimentResult,
    ExperimentSpec,
    ResultRow,
    emit,
    from_jsonable,
    parse_table,
    read_table,
    run_containment,
    run_degree_law,
    run_edge_slln,
    run_experiment,
    run_threshold_dichotomy,
    run_uniform_slln,
    to_jsonable,
    write_manifest,
)

__version__ = "0.1.0"
