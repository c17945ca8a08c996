"""Chromosomes and populations: gene value spaces, gene data types, sampling, duplicate repair.

All gene values are stored as double-precision floats regardless of their
declared gene type; the type is enforced by coercion at creation and after
every mutation. Populations are plain 2-D numpy arrays of shape
(sol_per_pop, num_genes).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, EmptySpace, InsufficientSpace, NonFiniteGene

if TYPE_CHECKING:
    from .config import GaConfig


class GeneType(Enum):
    """Storage type enforced on a gene after sampling, crossover, and mutation."""

    FLOAT32 = "float32"
    FLOAT64 = "float64"
    INT8 = "int8"
    INT16 = "int16"
    INT32 = "int32"
    INT64 = "int64"
    UINT8 = "uint8"
    UINT16 = "uint16"
    UINT32 = "uint32"
    UINT64 = "uint64"
    PYINT = "int"


_INT_BOUNDS = {
    GeneType.INT8: (-(2**7), 2**7 - 1),
    GeneType.INT16: (-(2**15), 2**15 - 1),
    GeneType.INT32: (-(2**31), 2**31 - 1),
    GeneType.INT64: (-(2**63), 2**63 - 1),
    GeneType.UINT8: (0, 2**8 - 1),
    GeneType.UINT16: (0, 2**16 - 1),
    GeneType.UINT32: (0, 2**32 - 1),
    GeneType.UINT64: (0, 2**64 - 1),
}

# Integers survive a round trip through a float64 only below 2**53.
_EXACT_INT_LIMIT = 2**53

# Step lattices larger than this are sampled without an exhaustive
# emptiness/enumeration pass (collisions there are practically impossible).
_LATTICE_ENUM_CAP = 1 << 20

_REDRAW_BUDGET = 100


@dataclass(frozen=True)
class Unconstrained:
    """Any finite value; initial samples are drawn from the configured init range."""


@dataclass(frozen=True)
class DiscreteSet:
    """A sparse, finite set of admissible gene values."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


@dataclass(frozen=True)
class ValueRange:
    """A half-open range [lo, hi), optionally restricted to the lattice lo, lo+step, ..."""

    lo: float
    hi: float
    step: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if self.step is not None:
            object.__setattr__(self, "step", float(self.step))


GeneSpace = Union[Unconstrained, DiscreteSet, ValueRange]

UNCONSTRAINED = Unconstrained()


def is_integer_type(gene_type: GeneType) -> bool:
    return gene_type in _INT_BOUNDS or gene_type is GeneType.PYINT


def _round_half_away(v: float) -> int:
    return math.floor(v + 0.5) if v >= 0 else math.ceil(v - 0.5)


def coerce_gene(v, gene_type: GeneType) -> float:
    """Force a raw value into the given gene type.

    Floats round to their storage precision; integer types round half away
    from zero and clamp into the representable range; PYINT rounds without
    clamping but rejects magnitudes beyond the exact double-integer range.
    """
    v = float(v)
    if not math.isfinite(v):
        raise NonFiniteGene(f"gene value {v!r} is not finite")
    if gene_type is GeneType.FLOAT64:
        return v
    if gene_type is GeneType.FLOAT32:
        return float(np.float32(v))
    if gene_type is GeneType.PYINT:
        if abs(v) > _EXACT_INT_LIMIT:
            raise NonFiniteGene(
                f"gene value {v!r} exceeds the exact double-precision integer range"
            )
        return float(_round_half_away(v))
    lo, hi = _INT_BOUNDS[gene_type]
    return float(min(max(_round_half_away(v), lo), hi))


def _lattice_size(space: ValueRange) -> int:
    # Number of points lo, lo+step, ... strictly below hi.
    return max(0, int(math.ceil((space.hi - space.lo) / space.step - 1e-12)))


def _typed_lattice(space: ValueRange, gene_type: GeneType) -> list:
    """Lattice points that survive coercion to the gene type unchanged, sorted.

    Only called for lattices of at most _LATTICE_ENUM_CAP points; a point the
    type cannot represent exactly is not admissible.
    """
    n = _lattice_size(space)
    points = space.lo + np.arange(n) * space.step
    return sorted({float(p) for p in points if coerce_gene(p, gene_type) == p})


def space_contains(space: GeneSpace, v: float, gene_type: GeneType = GeneType.FLOAT64) -> bool:
    """Whether v is an admissible (post-coercion) value for the space."""
    if isinstance(space, Unconstrained):
        return True
    if isinstance(space, DiscreteSet):
        return any(coerce_gene(s, gene_type) == v for s in space.values)
    if space.step is None:
        return space.lo <= v < space.hi
    if not (space.lo <= v < space.hi):
        return False
    k = int(round((v - space.lo) / space.step))
    if k < 0 or k >= _lattice_size(space):
        return False
    return space.lo + k * space.step == v and coerce_gene(v, gene_type) == v


def sample_gene(space: GeneSpace, gene_type: GeneType, init_range, rng) -> float:
    """Draw one value from the space's admissible set and coerce it to the gene type.

    Unconstrained genes sample uniformly from init_range; discrete sets pick a
    member uniformly; ranges sample uniformly over [lo, hi) or over the step
    lattice.
    """
    if isinstance(space, Unconstrained):
        return coerce_gene(rng.uniform(init_range[0], init_range[1]), gene_type)
    if isinstance(space, DiscreteSet):
        return coerce_gene(space.values[int(rng.integers(len(space.values)))], gene_type)
    if space.step is None:
        return coerce_gene(rng.uniform(space.lo, space.hi), gene_type)
    n = _lattice_size(space)
    if n == 0:
        raise EmptySpace(f"range {space.lo}..{space.hi} with step {space.step} has no points")
    if n <= _LATTICE_ENUM_CAP and is_integer_type(gene_type):
        lattice = _typed_lattice(space, gene_type)
        if not lattice:
            raise EmptySpace(
                f"no point of the step lattice {space.lo}..{space.hi}/{space.step} "
                f"is representable as {gene_type.value}"
            )
        return lattice[int(rng.integers(len(lattice)))]
    return coerce_gene(space.lo + int(rng.integers(n)) * space.step, gene_type)


def _candidate_values(space: GeneSpace, gene_type: GeneType):
    """Enumerable admissible values of a discrete/lattice space, or None if continuous."""
    if isinstance(space, DiscreteSet):
        return sorted({coerce_gene(v, gene_type) for v in space.values})
    if isinstance(space, ValueRange) and space.step is not None:
        if _lattice_size(space) <= _LATTICE_ENUM_CAP:
            return _typed_lattice(space, gene_type)
    return None


def _resample_excluding(space, gene_type, init_range, exclude, rng) -> float:
    candidates = _candidate_values(space, gene_type)
    if candidates is not None:
        pool = [v for v in candidates if v not in exclude]
        if not pool:
            raise InsufficientSpace(
                f"space {space!r} has no admissible value outside {sorted(exclude)}"
            )
        return pool[int(rng.integers(len(pool)))]
    for _ in range(_REDRAW_BUDGET):
        v = sample_gene(space, gene_type, init_range, rng)
        if v not in exclude:
            return v
    raise InsufficientSpace(
        f"no distinct value found in {space!r} after {_REDRAW_BUDGET} redraws"
    )


def repair_duplicates(chrom, spaces: Sequence[GeneSpace], types: Sequence[GeneType],
                      init_range, rng) -> np.ndarray:
    """Resample duplicated genes until all values are pairwise distinct.

    Scans left to right keeping the first occurrence of each value; a later
    duplicate is redrawn from its own admissible set excluding every value
    currently present in the chromosome.
    """
    genes = np.array(chrom, dtype=float, copy=True)
    for j in range(genes.size):
        if np.any(genes[:j] == genes[j]):
            exclude = set(np.delete(genes, j).tolist())
            genes[j] = _resample_excluding(spaces[j], types[j], init_range, exclude, rng)
    return genes


def resolve_spaces(cfg: "GaConfig") -> list:
    """Per-gene list of gene spaces (expands a global space to every position)."""
    if cfg.gene_space is None:
        return [UNCONSTRAINED] * cfg.num_genes
    if isinstance(cfg.gene_space, (Unconstrained, DiscreteSet, ValueRange)):
        return [cfg.gene_space] * cfg.num_genes
    return list(cfg.gene_space)


def resolve_types(cfg: "GaConfig") -> list:
    """Per-gene list of gene types (expands a global type to every position)."""
    if isinstance(cfg.gene_type, GeneType):
        return [cfg.gene_type] * cfg.num_genes
    return list(cfg.gene_type)


def init_population(cfg: "GaConfig", rng) -> np.ndarray:
    """Build the starting population for a validated config.

    A user-supplied initial population is coerced gene by gene (and repaired
    for duplicates when required) but is never rejected for lying outside the
    gene space. Otherwise every gene is sampled from its admissible set.
    """
    spaces = resolve_spaces(cfg)
    types = resolve_types(cfg)
    if cfg.initial_population is not None:
        pop = np.array(cfg.initial_population, dtype=float)
        if pop.shape != (cfg.sol_per_pop, cfg.num_genes):
            raise DimensionMismatch(
                f"initial population shape {pop.shape} != "
                f"({cfg.sol_per_pop}, {cfg.num_genes})"
            )
        for i in range(cfg.sol_per_pop):
            for j in range(cfg.num_genes):
                pop[i, j] = coerce_gene(pop[i, j], types[j])
            if not cfg.allow_duplicate_genes:
                pop[i] = repair_duplicates(pop[i], spaces, types, cfg.init_range, rng)
        return pop
    rows = []
    for _ in range(cfg.sol_per_pop):
        row = np.array(
            [sample_gene(spaces[j], types[j], cfg.init_range, rng) for j in range(cfg.num_genes)]
        )
        if not cfg.allow_duplicate_genes:
            row = repair_duplicates(row, spaces, types, cfg.init_range, rng)
        rows.append(row)
    return np.vstack(rows)


def population_to_csv(pop) -> str:
    """Serialize a population, one chromosome per row, genes as decimal literals."""
    out = io.StringIO()
    for row in np.asarray(pop, dtype=float):
        out.write(",".join(repr(float(v)) for v in row))
        out.write("\n")
    return out.getvalue()


def population_from_csv(text: str) -> np.ndarray:
    """Parse a population serialized by population_to_csv."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([float(cell) for cell in line.split(",")])
    if not rows:
        raise DimensionMismatch("population CSV holds no rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("population CSV rows have unequal lengths")
    return np.array(rows, dtype=float)
