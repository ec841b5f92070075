"""Genetic algorithm over binary feature masks.

Each generation keeps the fittest ``elite_count`` masks unchanged and
refills the rest of the population with mutated crossovers of elite pairs.
Crossover is single-point between two distinct elites; mutation flips a
fixed number of distinct positions (half the mask length by default,
rounded up), which keeps exploration pressure high even late in a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fitness import FitnessEvaluator
from .base import PopulationSearch, RunConfig, random_population, repair_zero_rows


@dataclass(frozen=True)
class GaParams:
    elite_count: int = 4
    mutation_genes: int | None = None  # None means ceil(n_features / 2)

    def __post_init__(self) -> None:
        if self.elite_count < 2:
            raise ValueError("elite_count must be at least 2 to allow crossover")


def crossover(
    parent_a: np.ndarray, parent_b: np.ndarray, point: int
) -> np.ndarray:
    """Child takes parent_a bits before ``point`` and parent_b bits after.

    ``point`` must be in [1, n-1] so both parents contribute.
    """
    n = parent_a.size
    if not 1 <= point <= n - 1:
        raise ValueError(f"crossover point {point} outside [1, {n - 1}]")
    child = np.empty(n, dtype=np.uint8)
    child[:point] = parent_a[:point]
    child[point:] = parent_b[point:]
    return child


def mutate(bits: np.ndarray, genes: int, rng: np.random.Generator) -> np.ndarray:
    """Flip exactly ``genes`` distinct uniformly chosen positions, in place."""
    if not 0 <= genes <= bits.size:
        raise ValueError(f"cannot flip {genes} of {bits.size} genes")
    if genes:
        where = rng.choice(bits.size, size=genes, replace=False)
        bits[where] ^= 1
    return bits


class GeneticAlgorithm(PopulationSearch):
    algorithm = "ga"

    def __init__(
        self,
        evaluator: FitnessEvaluator,
        run: RunConfig,
        params: GaParams | None = None,
    ):
        super().__init__(evaluator, run)
        self.params = params or GaParams()
        if self.params.elite_count > run.agents:
            raise ValueError("elite_count cannot exceed the population size")
        self._genes = (
            self.params.mutation_genes
            if self.params.mutation_genes is not None
            else math.ceil(self.n_features / 2)
        )
        if self._genes > self.n_features:
            raise ValueError("mutation_genes cannot exceed the mask length")
        self.population: np.ndarray | None = None

    def _init(self, rng: np.random.Generator) -> None:
        self.population = random_population(rng, self.run_config.agents, self.n_features)

    def _generation(self, generation: int, rng: np.random.Generator) -> None:
        values = self._evaluate_population(self.population)
        fitnesses = np.array([v.fitness for v in values])
        # stable sort keeps the earlier row on equal fitness
        order = np.argsort(-fitnesses, kind="stable")
        e = self.params.elite_count
        elites = self.population[order[:e]].copy()
        children = np.empty(
            (self.run_config.agents - e, self.n_features), dtype=np.uint8
        )
        for c in range(children.shape[0]):
            pa, pb = rng.choice(e, size=2, replace=False)
            if self.n_features > 1:
                point = int(rng.integers(1, self.n_features))
                child = crossover(elites[pa], elites[pb], point)
            else:
                child = elites[pa].copy()
            children[c] = mutate(child, self._genes, rng)
        repair_zero_rows(children, rng)
        self.population = np.vstack([elites, children])
