"""Shared machinery for the population-based binary searchers.

All three algorithms walk the same loop: evaluate a population of masks,
track the best mask seen, and move the population. Randomness is organized
as one generator per (seed, algorithm tag, generation) triple, with
generation 0 reserved for initialization, so any single generation can be
replayed in isolation. Population state updates are synchronous: every
agent moves against the same snapshot of the shared best before any
evaluation of the new positions happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..dataset import FeatureMask, seeded_rng
from ..fitness import FitnessEvaluator, FitnessValue


@dataclass(frozen=True)
class MaxGenerations:
    """Run every configured generation (the default)."""


@dataclass(frozen=True)
class FitnessTarget:
    """Stop at the end of the first generation whose best reaches ``value``."""

    value: float


@dataclass(frozen=True)
class Stagnation:
    """Stop after ``n`` consecutive generations without improvement."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("stagnation window must be at least 1")


Termination = Union[MaxGenerations, FitnessTarget, Stagnation]


@dataclass(frozen=True)
class RunConfig:
    agents: int = 20
    generations: int = 100
    seed: int = 0
    termination: Termination = MaxGenerations()

    def __post_init__(self) -> None:
        if self.agents < 2:
            raise ValueError("need at least 2 agents")
        if self.generations < 1:
            raise ValueError("need at least 1 generation")


@dataclass
class FitnessHistory:
    """Per-generation best-so-far trace plus the winning mask.

    ``best_per_generation`` holds one entry per executed generation and is
    non-decreasing. Initial-population evaluations that some algorithms
    perform before their first move seed the best trackers but add no
    history entry.
    """

    algorithm: str
    seed: int
    best_per_generation: list[float] = field(default_factory=list)
    best_mask: FeatureMask | None = None
    best_value: FitnessValue | None = None

    @property
    def generations_run(self) -> int:
        return len(self.best_per_generation)


ALGORITHM_TAGS = {"ga": 1, "pso": 2, "woa": 3}


def generation_rng(seed: int, algorithm: str, generation: int) -> np.random.Generator:
    """Generator for one generation; generation 0 is initialization."""
    return seeded_rng(seed, ALGORITHM_TAGS[algorithm], generation)


def repair_zero_rows(bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Flip one uniformly chosen bit in every all-zero row, in row order."""
    zero = np.flatnonzero(bits.sum(axis=1) == 0)
    for r in zero:
        bits[r, int(rng.integers(bits.shape[1]))] = 1
    return bits


def random_population(
    rng: np.random.Generator, agents: int, n_features: int
) -> np.ndarray:
    """Bernoulli(0.5) masks with all-zero rows repaired."""
    bits = (rng.random((agents, n_features)) < 0.5).astype(np.uint8)
    return repair_zero_rows(bits, rng)


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sample_bits(
    positions: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Bit i is 1 with probability sigmoid(position i)."""
    probs = sigmoid(positions)
    return (rng.random(positions.shape) < probs).astype(np.uint8)


class PopulationSearch:
    """Template for the three searchers.

    Subclasses set ``algorithm`` and implement ``_init`` (build the starting
    population) and ``_generation`` (move and evaluate one step, calling
    ``_offer`` with every evaluated mask).
    """

    algorithm = ""

    def __init__(self, evaluator: FitnessEvaluator, run: RunConfig):
        self.evaluator = evaluator
        self.run_config = run
        self.n_features = evaluator.n_features
        self.best_bits: np.ndarray | None = None
        self.best_value: FitnessValue | None = None

    def _offer(self, bits: np.ndarray, value: FitnessValue) -> bool:
        """Adopt strictly better masks; first seen wins ties."""
        if self.best_value is None or value.fitness > self.best_value.fitness:
            self.best_bits = bits.copy()
            self.best_value = value
            return True
        return False

    def _evaluate_population(self, bits: np.ndarray) -> list[FitnessValue]:
        values = []
        for row in bits:
            value = self.evaluator.evaluate_bits(row)
            self._offer(row, value)
            values.append(value)
        return values

    def _init(self, rng: np.random.Generator) -> None:
        raise NotImplementedError

    def _generation(self, generation: int, rng: np.random.Generator) -> None:
        raise NotImplementedError

    def search(self) -> FitnessHistory:
        cfg = self.run_config
        self._init(generation_rng(cfg.seed, self.algorithm, 0))
        history = FitnessHistory(algorithm=self.algorithm, seed=cfg.seed)
        term = cfg.termination
        stagnant = 0
        for gen in range(1, cfg.generations + 1):
            before = self.best_value.fitness if self.best_value is not None else None
            self._generation(gen, generation_rng(cfg.seed, self.algorithm, gen))
            now = self.best_value.fitness
            history.best_per_generation.append(now)
            if before is not None and now <= before:
                stagnant += 1
            else:
                stagnant = 0
            if isinstance(term, FitnessTarget) and now >= term.value:
                break
            if isinstance(term, Stagnation) and stagnant >= term.n:
                break
        history.best_mask = FeatureMask(self.best_bits)
        history.best_value = self.best_value
        return history
