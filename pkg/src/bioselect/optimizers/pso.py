"""Binary particle swarm optimization with a genotype-phenotype split.

Each particle carries a real genotype vector and a binary phenotype mask.
Velocities are driven by the distance of the *phenotype* from the personal
and global best masks, accumulate into the genotype, and the phenotype is
resampled each step with per-bit probability sigmoid(genotype). A plain
variant (``plain=True``) skips the genotype accumulator and samples bits
from sigmoid(velocity) directly, as in the original binary formulation.

Velocities are clamped to a symmetric band, and with probability
``mutation_p`` a particle's whole velocity vector is negated after
clamping, which kicks stalled particles out of saturation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fitness import FitnessEvaluator
from .base import (
    PopulationSearch,
    RunConfig,
    random_population,
    repair_zero_rows,
    sample_bits,
)


@dataclass(frozen=True)
class PsoParams:
    c1: float = 2.0
    c2: float = 2.0
    w_start: float = 0.9
    w_end: float = 0.4
    v_max: float = 4.0
    mutation_p: float = 0.1
    plain: bool = False

    def __post_init__(self) -> None:
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")
        if not 0.0 <= self.mutation_p <= 1.0:
            raise ValueError("mutation_p must be a probability")


class BinaryPso(PopulationSearch):
    algorithm = "pso"

    def __init__(
        self,
        evaluator: FitnessEvaluator,
        run: RunConfig,
        params: PsoParams | None = None,
    ):
        super().__init__(evaluator, run)
        self.params = params or PsoParams()
        self.phenotype: np.ndarray | None = None
        self.genotype: np.ndarray | None = None
        self.velocity: np.ndarray | None = None
        self.pbest_bits: np.ndarray | None = None
        self.pbest_fitness: np.ndarray | None = None

    def inertia(self, generation: int) -> float:
        """Linear decay from w_start at the first generation to w_end at the last."""
        p = self.params
        span = max(self.run_config.generations - 1, 1)
        return p.w_start - (p.w_start - p.w_end) * (generation - 1) / span

    def _init(self, rng: np.random.Generator) -> None:
        shape = (self.run_config.agents, self.n_features)
        self.phenotype = random_population(rng, *shape)
        self.genotype = rng.uniform(-1.0, 1.0, shape)
        self.velocity = rng.uniform(-1.0, 1.0, shape)
        values = self._evaluate_population(self.phenotype)
        self.pbest_bits = self.phenotype.copy()
        self.pbest_fitness = np.array([v.fitness for v in values])

    def _generation(self, generation: int, rng: np.random.Generator) -> None:
        p = self.params
        shape = self.velocity.shape
        phen = self.phenotype.astype(np.float64)
        r1 = rng.random(shape)
        r2 = rng.random(shape)
        cognitive = p.c1 * r1 * (self.pbest_bits.astype(np.float64) - phen)
        social = p.c2 * r2 * (self.best_bits.astype(np.float64) - phen)
        self.velocity = self.inertia(generation) * self.velocity + cognitive + social
        np.clip(self.velocity, -p.v_max, p.v_max, out=self.velocity)
        flip = rng.random(shape[0]) < p.mutation_p
        self.velocity[flip] *= -1.0
        if p.plain:
            self.phenotype = sample_bits(self.velocity, rng)
        else:
            self.genotype = self.genotype + self.velocity
            self.phenotype = sample_bits(self.genotype, rng)
        repair_zero_rows(self.phenotype, rng)
        values = self._evaluate_population(self.phenotype)
        fits = np.array([v.fitness for v in values])
        better = fits > self.pbest_fitness
        self.pbest_bits[better] = self.phenotype[better]
        self.pbest_fitness[better] = fits[better]
