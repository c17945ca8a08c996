"""The evolution loop: lifecycle callbacks, elitism, per-generation records, results.

One run executes on one logical thread; hooks are invoked synchronously on
that thread. Every stochastic stage draws from its own substream derived from
(seed, generation, stage), so toggling one operator never perturbs the random
draws of the others and identical configs replay bit-identically.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .config import GaConfig, MutationKind
from .errors import DimensionMismatch, FitnessError
from .genome import coerce_gene, init_population, repair_duplicates, resolve_spaces, resolve_types
from .operators import ParentSet, mutate, produce_offspring, select_parents

_STAGE_INIT = 0
_STAGE_SELECTION = 1
_STAGE_CROSSOVER = 2
_STAGE_MUTATION = 3


class GaControl(Enum):
    """Control value an on_generation hook may return."""

    CONTINUE = "continue"
    STOP = "stop"


class StopReason(Enum):
    EXHAUSTED = "exhausted"
    CALLBACK_STOP = "callback_stop"


@dataclass
class LifecycleHooks:
    """The seven optional lifecycle callbacks, each receiving the engine state handle.

    on_generation may return GaControl.STOP (or the string "stop") to end the
    run after the current generation. on_crossover and on_mutation may
    overwrite the corresponding last_generation_offspring_* array on the state
    handle to plug in custom operators.
    """

    on_start: Optional[Callable] = None
    on_fitness: Optional[Callable] = None
    on_parents: Optional[Callable] = None
    on_crossover: Optional[Callable] = None
    on_mutation: Optional[Callable] = None
    on_generation: Optional[Callable] = None
    on_stop: Optional[Callable] = None


@dataclass
class GenerationRecord:
    """Snapshot of everything one generation produced."""

    generation_index: int
    fitness: np.ndarray
    parents: ParentSet
    offspring_crossover: np.ndarray
    offspring_mutation: np.ndarray
    best_solution: np.ndarray
    best_fitness: float
    best_index: int


@dataclass
class RunResult:
    """Per-generation best history plus the overall best solution.

    History entry 0 is the initial population, so the arrays hold
    completed_generations + 1 rows. overall_best carries the index of the best
    solution within the final population, or -1 when the best appeared in an
    earlier generation.
    """

    best_solutions: np.ndarray
    best_solutions_fitness: np.ndarray
    best_solution_indices: np.ndarray
    mean_fitness: np.ndarray
    overall_best: tuple
    completed_generations: int
    stop_reason: StopReason


class EngineState:
    """Mutable view of a run handed to lifecycle hooks.

    The last_generation_* attributes mirror the most recent stage outputs;
    hooks may replace last_generation_offspring_crossover or
    last_generation_offspring_mutation and the engine consumes the overwritten
    arrays downstream.
    """

    def __init__(self, cfg: GaConfig, population: np.ndarray) -> None:
        self.cfg = cfg
        self.population = population
        self.generation = -1
        self.generations_completed = 0
        self.last_generation_fitness: Optional[np.ndarray] = None
        self.last_generation_parents: Optional[np.ndarray] = None
        self.last_generation_parents_indices: Optional[np.ndarray] = None
        self.last_generation_offspring_crossover: Optional[np.ndarray] = None
        self.last_generation_offspring_mutation: Optional[np.ndarray] = None
        self.last_record: Optional[GenerationRecord] = None
        self.best_solutions: list = []
        self.best_solutions_fitness: list = []


def _stage_rng(seed: int, generation: int, stage: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(generation), int(stage)])


def evaluate_population(population, fitness, parallel: bool = False,
                        generation=None) -> np.ndarray:
    """Evaluate fitness(pop[i], i) for every row, optionally fanning out to threads.

    Results are assembled by index, so the vector is identical regardless of
    the parallel flag or evaluation completion order.
    """
    population = np.asarray(population, dtype=float)
    size = population.shape[0]

    def eval_one(i: int) -> float:
        try:
            value = float(fitness(population[i], i))
        except FitnessError:
            raise
        except Exception as exc:
            raise FitnessError(
                f"fitness evaluation raised {exc!r}", generation, i
            ) from exc
        if not math.isfinite(value):
            raise FitnessError(
                f"fitness returned non-finite value {value!r}", generation, i
            )
        return value

    if parallel:
        with ThreadPoolExecutor() as pool:
            values = list(pool.map(eval_one, range(size)))
    else:
        values = [eval_one(i) for i in range(size)]
    return np.array(values, dtype=float)


def _fire(hook, state):
    if hook is not None:
        return hook(state)
    return None


def _should_stop(control) -> bool:
    return control is GaControl.STOP or control == "stop"


def _check_offspring_shape(offspring, count: int, num_genes: int) -> np.ndarray:
    # Hooks may replace offspring arrays but must preserve their shape, or the
    # population would drift away from sol_per_pop rows.
    offspring = np.asarray(offspring, dtype=float)
    if offspring.shape != (count, num_genes):
        raise DimensionMismatch(
            f"offspring array shape {offspring.shape} != ({count}, {num_genes})"
        )
    return offspring


def _normalize_offspring(cfg, offspring, spaces, types, rng) -> np.ndarray:
    # Crossover (and hook overwrites) can break typing or distinctness even
    # though mutate() repairs its own output; normalize before assembly.
    offspring = np.array(offspring, dtype=float, copy=True)
    for row in offspring:
        for j in range(row.size):
            row[j] = coerce_gene(row[j], types[j])
    if not cfg.allow_duplicate_genes:
        for i in range(offspring.shape[0]):
            offspring[i] = repair_duplicates(
                offspring[i], spaces, types, cfg.init_range, rng
            )
    return offspring


def run(cfg: GaConfig, fitness, hooks: Optional[LifecycleHooks] = None) -> RunResult:
    """Evolve a population for cfg.num_generations generations.

    Per generation: evaluate fitness, record the best, select parents, breed
    offspring (plain copies when crossover is disabled), mutate them (pass
    through when mutation is disabled), then assemble the next population from
    keep_parents elites plus the offspring. The crossover and mutation hooks
    fire even when their operator is disabled. After the loop the final
    population is evaluated and appended to the history, so a 0-generation run
    still reports the initial population's best.
    """
    hooks = hooks or LifecycleHooks()
    spaces = resolve_spaces(cfg)
    types = resolve_types(cfg)

    population = init_population(cfg, _stage_rng(cfg.seed, 0, _STAGE_INIT))
    population.flags.writeable = False
    state = EngineState(cfg, population)

    best_rows: list = []
    best_fits: list = []
    best_idxs: list = []
    mean_fits: list = []

    def record_entry(fit_vector: np.ndarray) -> tuple:
        best_index = int(np.argmax(fit_vector))  # argmax takes the lowest index on ties
        best_rows.append(population[best_index].copy())
        best_fits.append(float(fit_vector[best_index]))
        best_idxs.append(best_index)
        mean_fits.append(float(fit_vector.mean()))
        return best_index, float(fit_vector[best_index])

    _fire(hooks.on_start, state)

    stop_reason = StopReason.EXHAUSTED
    completed = 0
    adaptive = cfg.mutation is MutationKind.ADAPTIVE
    offspring_count = cfg.sol_per_pop - cfg.keep_parents

    for g in range(cfg.num_generations):
        state.generation = g

        fit = evaluate_population(population, fitness, cfg.parallel_fitness, generation=g)
        state.last_generation_fitness = fit
        _fire(hooks.on_fitness, state)

        best_index, best_fit = record_entry(fit)
        state.best_solutions = best_rows
        state.best_solutions_fitness = best_fits

        parents = select_parents(
            cfg.parent_selection, population, fit, cfg.num_parents_mating,
            _stage_rng(cfg.seed, g, _STAGE_SELECTION), cfg.tournament_k,
        )
        state.last_generation_parents = parents.rows
        state.last_generation_parents_indices = parents.indices
        _fire(hooks.on_parents, state)

        offspring = produce_offspring(
            cfg.crossover, parents, offspring_count,
            _stage_rng(cfg.seed, g, _STAGE_CROSSOVER),
        )
        state.last_generation_offspring_crossover = offspring
        _fire(hooks.on_crossover, state)
        offspring = _check_offspring_shape(
            state.last_generation_offspring_crossover, offspring_count, cfg.num_genes
        )

        mutation_rng = _stage_rng(cfg.seed, g, _STAGE_MUTATION)
        if cfg.mutation is not None:
            mean_fit = float(fit.mean())
            p = parents.rows.shape[0]
            mutated = np.array([
                mutate(
                    cfg.mutation, child, cfg, mean_fit,
                    float(fit[parents.indices[i % p]]) if adaptive else None,
                    mutation_rng, spaces=spaces, types=types,
                )
                for i, child in enumerate(offspring)
            ])
        else:
            mutated = offspring
        state.last_generation_offspring_mutation = mutated
        _fire(hooks.on_mutation, state)
        mutated = _check_offspring_shape(
            state.last_generation_offspring_mutation, offspring_count, cfg.num_genes
        )

        mutated = _normalize_offspring(cfg, mutated, spaces, types, mutation_rng)
        if cfg.keep_parents > 0:
            population = np.vstack([parents.rows[: cfg.keep_parents], mutated])
        else:
            population = mutated
        population.flags.writeable = False
        state.population = population

        completed = g + 1
        state.generations_completed = completed
        state.last_record = GenerationRecord(
            generation_index=g,
            fitness=fit,
            parents=parents,
            offspring_crossover=np.asarray(state.last_generation_offspring_crossover),
            offspring_mutation=mutated,
            best_solution=best_rows[-1],
            best_fitness=best_fit,
            best_index=best_index,
        )
        if _should_stop(_fire(hooks.on_generation, state)):
            stop_reason = StopReason.CALLBACK_STOP
            break

    final_fit = evaluate_population(
        population, fitness, cfg.parallel_fitness, generation=completed
    )
    record_entry(final_fit)
    state.last_generation_fitness = final_fit
    _fire(hooks.on_stop, state)

    best_fit_arr = np.array(best_fits)
    overall = int(np.argmax(best_fit_arr))  # earliest generation wins ties
    overall_index = best_idxs[overall] if overall == len(best_fits) - 1 else -1
    return RunResult(
        best_solutions=np.array(best_rows),
        best_solutions_fitness=best_fit_arr,
        best_solution_indices=np.array(best_idxs, dtype=int),
        mean_fitness=np.array(mean_fits),
        overall_best=(best_rows[overall], best_fits[overall], overall_index),
        completed_generations=completed,
        stop_reason=stop_reason,
    )


def best_solution(result: RunResult) -> tuple:
    """The best solution across the whole history: (chromosome, fitness, index).

    Ties break toward the earliest generation; the index is the solution's row
    in its own generation's population.
    """
    g = int(np.argmax(result.best_solutions_fitness))
    return (
        result.best_solutions[g],
        float(result.best_solutions_fitness[g]),
        int(result.best_solution_indices[g]),
    )


def fitness_history(result: RunResult):
    """Rows of (generation, best_fitness, mean_fitness), generation ascending."""
    return [
        (g, float(result.best_solutions_fitness[g]), float(result.mean_fitness[g]))
        for g in range(len(result.best_solutions_fitness))
    ]
