"""Single conflict coloring of r-uniform hypergraphs and list coloring from
random palettes, with exact small-instance oracles and seeded Monte Carlo
experiment harnesses."""

from .hypergraph import (
    DegeneracyOrder,
    DensityBound,
    FormatError,
    Hypergraph,
    HypergraphError,
    degeneracy_order,
    density,
    gen_complete_r_partite,
    gen_complete_uniform,
    gen_disjoint_cliques,
    gen_random_degenerate,
    gen_random_linear,
    is_linear,
    load,
    loads,
    max_density,
    save,
    serialize,
)
from .outcomes import Estimate, SolveOutcome, Status, derive_rng, derive_seed, wilson_interval
from .conflict import (
    LocalKPartition,
    TheoryBounds,
    check_conflict_coloring,
    chi_single_conflict,
    count_conflict_colorings,
    estimate_p,
    exact_p,
    expected_colorings,
    greedy_color,
    random_local_partition,
    reduce_adapted_to_conflict,
    reduce_separation_to_adapted,
    solve_conflict,
    theory_bounds,
)
from .palette import (
    ColorDegreeTable,
    ListAssignment,
    check_list_coloring,
    chernoff_lower_tail,
    chernoff_upper_tail,
    clique_same_list_probability,
    color_degrees,
    drgas_sufficient,
    lll_resample_color,
    prune_bad_colors,
    random_list_assignment,
    solve_list_coloring,
)
from .lab import ExperimentConfig, ScanRow, emit_csv, run_experiment

__version__ = "0.1.0"
