"""NSGA-III on the m-objective OneJumpZeroJump benchmark."""

from ._core import (
    ExperimentConfig,
    Genome,
    IoError,
    NormalizationState,
    OjzjInstance,
    RandomStream,
    ReferenceSet,
    RegimeError,
    UsageError,
    associate,
    block,
    block_objectives,
    brute_force_front,
    compare_crossover,
    cover_cap,
    dominates,
    evaluate,
    genome_class,
    hamming,
    non_dominated_sort,
    pareto_front,
    perpendicular_distance,
    r_vector,
    read_summary_csv,
    reference_point_count,
    run_suite,
    run_trial,
    standard_bit_mutation,
    theorem_lattice_p,
    uniform_crossover,
    uniform_random_genome,
    weakly_dominates,
)

__all__ = [name for name in dir() if not name.startswith("_")]
