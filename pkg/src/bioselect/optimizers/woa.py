"""Binary whale optimization over real-valued positions.

Agents move in a continuous space and are binarized to masks by sigmoid
sampling each generation. Movement follows the whale dynamics: with
probability ``branch_p`` an agent spirals toward the best position found
so far; otherwise it either encircles the best (|A| < 1, componentwise) or
explores around a randomly chosen agent. The coefficient ``a`` shrinks
linearly from 2 to 0 over the configured generations, so encircling
contracts exactly onto the best position by the final generation.

The |A| < 1 test is per component: with a fresh r drawn per component, A is
a vector, and each coordinate independently follows the encircle or explore
rule against the same randomly chosen partner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fitness import FitnessEvaluator
from .base import PopulationSearch, RunConfig, repair_zero_rows, sample_bits


@dataclass(frozen=True)
class WoaParams:
    spiral_b: float = 1.0
    branch_p: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.branch_p <= 1.0:
            raise ValueError("branch_p must be a probability")


def whale_move(
    positions: np.ndarray,
    best_position: np.ndarray,
    a: float,
    spiral_b: float,
    branch_p: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """One synchronous movement step against a fixed best position.

    Draw order per call: the (agents, features) coefficient matrix r, the
    per-agent branch uniform q, the per-agent spiral parameter l, then the
    per-agent random partner index.
    """
    n_agents = positions.shape[0]
    r = rng.random(positions.shape)
    A = 2.0 * a * r - a
    C = 2.0 * r
    q = rng.random(n_agents)
    l = rng.random(n_agents)
    partner = rng.integers(n_agents, size=n_agents)

    gap = np.abs(best_position - positions)
    swirl = np.exp(spiral_b * l) * np.cos(2.0 * np.pi * l)
    spiral = gap * swirl[:, None] + best_position

    encircle = best_position - A * np.abs(C * best_position - positions)
    X_rand = positions[partner]
    explore = X_rand - A * np.abs(C * X_rand - positions)
    tracked = np.where(np.abs(A) < 1.0, encircle, explore)

    return np.where((q < branch_p)[:, None], spiral, tracked)


class BinaryWoa(PopulationSearch):
    algorithm = "woa"

    def __init__(
        self,
        evaluator: FitnessEvaluator,
        run: RunConfig,
        params: WoaParams | None = None,
    ):
        super().__init__(evaluator, run)
        self.params = params or WoaParams()
        self.positions: np.ndarray | None = None
        self.masks: np.ndarray | None = None
        self.best_position: np.ndarray | None = None

    def _evaluate_agents(self, masks: np.ndarray, positions: np.ndarray) -> None:
        for i in range(masks.shape[0]):
            value = self.evaluator.evaluate_bits(masks[i])
            if self._offer(masks[i], value):
                self.best_position = positions[i].copy()

    def _init(self, rng: np.random.Generator) -> None:
        shape = (self.run_config.agents, self.n_features)
        self.positions = rng.uniform(-1.0, 1.0, shape)
        self.masks = repair_zero_rows(sample_bits(self.positions, rng), rng)
        self._evaluate_agents(self.masks, self.positions)

    def _generation(self, generation: int, rng: np.random.Generator) -> None:
        a = 2.0 * (1.0 - generation / self.run_config.generations)
        self.positions = whale_move(
            self.positions,
            self.best_position,
            a,
            self.params.spiral_b,
            self.params.branch_p,
            rng,
        )
        self.masks = repair_zero_rows(sample_bits(self.positions, rng), rng)
        self._evaluate_agents(self.masks, self.positions)
