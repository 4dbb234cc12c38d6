"""Monotone objective maximization over finite and subspace lattices."""

from .diagnostics import (
    CoherenceBoundCheck,
    GapReport,
    SaturationGapCheck,
    check_coherence_bound,
    check_prop1_equivalence,
    check_saturation_gap_bound,
    measure_downward_gap,
    measure_strong_gap,
    measure_upward_gap,
    reevaluate_witness,
    sample_strong_gap_vector,
)
from .dictionary import (
    CoherenceReport,
    Dictionary,
    EnumeratedLattice,
    coherence_lattice,
    coherence_vectors,
    enumerate_lattice,
    lattice_coherence_report,
)
from .experiments import (
    ExperimentReport,
    MixtureSpec,
    PlaneSelection,
    generate_mixture,
    run_appendix_experiment,
    write_scatter_csvs,
    write_summary_json,
)
from .lattice import (
    ExplicitLattice,
    FiniteLattice,
    NotALatticeError,
    SetLattice,
    SizeLimitError,
)
from .objectives import (
    ConcaveRho,
    GeneralizedPCAObjective,
    ModularCost,
    PCAObjective,
    QuantumCutObjective,
    SaturatingFamily,
    TableObjective,
    WeightedDigraph,
    check_order_consistency,
    fractional_energy_family,
    marginal,
    rho_from_json_dict,
)
from .oracle import BruteForceResult, brute_force_max, ratio_holds
from .solvers import (
    ExactEigen,
    Grid,
    RandomRestart,
    SolveReport,
    double_greedy,
    greedy_height,
    greedy_knapsack,
    strategy_from_name,
)
from .subspaces import (
    Direction,
    Subspace,
    VectorLattice,
    codim1_descend,
    load_vectors_csv,
    ortho_complement,
    residual_direction,
    subspace_eq,
    subspace_leq,
    vjoin,
    vmeet,
)

__all__ = [
    "BruteForceResult",
    "CoherenceBoundCheck",
    "CoherenceReport",
    "ConcaveRho",
    "Dictionary",
    "Direction",
    "EnumeratedLattice",
    "ExactEigen",
    "ExperimentReport",
    "ExplicitLattice",
    "FiniteLattice",
    "GapReport",
    "GeneralizedPCAObjective",
    "Grid",
    "MixtureSpec",
    "ModularCost",
    "NotALatticeError",
    "PCAObjective",
    "PlaneSelection",
    "QuantumCutObjective",
    "RandomRestart",
    "SaturatingFamily",
    "SaturationGapCheck",
    "SetLattice",
    "SizeLimitError",
    "SolveReport",
    "Subspace",
    "TableObjective",
    "VectorLattice",
    "WeightedDigraph",
    "check_coherence_bound",
    "check_order_consistency",
    "check_prop1_equivalence",
    "check_saturation_gap_bound",
    "codim1_descend",
    "coherence_lattice",
    "coherence_vectors",
    "double_greedy",
    "enumerate_lattice",
    "fractional_energy_family",
    "generate_mixture",
    "greedy_height",
    "greedy_knapsack",
    "lattice_coherence_report",
    "load_vectors_csv",
    "marginal",
    "measure_downward_gap",
    "measure_strong_gap",
    "measure_upward_gap",
    "ortho_complement",
    "ratio_holds",
    "reevaluate_witness",
    "residual_direction",
    "rho_from_json_dict",
    "run_appendix_experiment",
    "sample_strong_gap_vector",
    "strategy_from_name",
    "subspace_eq",
    "subspace_leq",
    "vjoin",
    "vmeet",
    "write_scatter_csvs",
    "write_summary_json",
    "brute_force_max",
]
