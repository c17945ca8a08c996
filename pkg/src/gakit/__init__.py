"""Single-objective genetic-algorithm engine with lifecycle hooks, constrained genes, and a CLI."""

from .config import (
    AdaptivePair,
    CrossoverKind,
    GaConfig,
    MutationKind,
    NumGenes,
    ParentSelection,
    PercentGenes,
    Probability,
    resolve_mutation_count,
    validate,
)
from .engine import (
    GaControl,
    GenerationRecord,
    LifecycleHooks,
    RunResult,
    StopReason,
    best_solution,
    evaluate_population,
    fitness_history,
    run,
)
from .genome import (
    UNCONSTRAINED,
    DiscreteSet,
    GeneType,
    Unconstrained,
    ValueRange,
    coerce_gene,
    init_population,
    population_from_csv,
    population_to_csv,
    repair_duplicates,
    sample_gene,
)
from .operators import ParentSet, crossover_pair, mutate, produce_offspring, select_parents

__all__ = [
    "AdaptivePair",
    "CrossoverKind",
    "DiscreteSet",
    "GaConfig",
    "GaControl",
    "GeneType",
    "GenerationRecord",
    "LifecycleHooks",
    "MutationKind",
    "NumGenes",
    "ParentSelection",
    "ParentSet",
    "PercentGenes",
    "Probability",
    "RunResult",
    "StopReason",
    "UNCONSTRAINED",
    "Unconstrained",
    "ValueRange",
    "best_solution",
    "coerce_gene",
    "crossover_pair",
    "evaluate_population",
    "fitness_history",
    "init_population",
    "mutate",
    "population_from_csv",
    "population_to_csv",
    "produce_offspring",
    "repair_duplicates",
    "resolve_mutation_count",
    "run",
    "sample_gene",
    "select_parents",
    "validate",
]
