"""Population-based binary searchers over feature masks."""

from __future__ import annotations

from ..dataset import Dataset
from ..fitness import FitnessConfig, FitnessEvaluator
from .base import (
    FitnessHistory,
    FitnessTarget,
    MaxGenerations,
    PopulationSearch,
    RunConfig,
    Stagnation,
)
from .ga import GaParams, GeneticAlgorithm
from .pso import BinaryPso, PsoParams
from .woa import BinaryWoa, WoaParams

_ALIASES = {
    "ga": "ga",
    "pso": "pso",
    "bpso": "pso",
    "woa": "woa",
    "bwoa": "woa",
}

ALGORITHMS = ("ga", "pso", "woa")


def canonical_name(algorithm: str) -> str:
    try:
        return _ALIASES[algorithm.lower()]
    except KeyError:
        raise ValueError(
            f"unknown algorithm {algorithm!r}; expected one of {sorted(_ALIASES)}"
        ) from None


def build_search(
    algorithm: str,
    evaluator: FitnessEvaluator,
    run: RunConfig,
    ga_params: GaParams | None = None,
    pso_params: PsoParams | None = None,
    woa_params: WoaParams | None = None,
) -> PopulationSearch:
    name = canonical_name(algorithm)
    if name == "ga":
        return GeneticAlgorithm(evaluator, run, ga_params)
    if name == "pso":
        return BinaryPso(evaluator, run, pso_params)
    return BinaryWoa(evaluator, run, woa_params)


def run_search(
    algorithm: str,
    train: Dataset | None = None,
    run: RunConfig | None = None,
    fitness_config: FitnessConfig | None = None,
    evaluator: FitnessEvaluator | None = None,
    ga_params: GaParams | None = None,
    pso_params: PsoParams | None = None,
    woa_params: WoaParams | None = None,
) -> FitnessHistory:
    """Run one feature-selection search end to end.

    Pass an evaluator directly to share its cache across runs; otherwise
    one is built from the dataset and fitness configuration.
    """
    if evaluator is None:
        if train is None:
            raise ValueError("need a dataset or an evaluator")
        evaluator = FitnessEvaluator(train, fitness_config)
    search = build_search(
        algorithm, evaluator, run or RunConfig(), ga_params, pso_params, woa_params
    )
    return search.search()


__all__ = [
    "ALGORITHMS",
    "BinaryPso",
    "BinaryWoa",
    "FitnessHistory",
    "FitnessTarget",
    "GaParams",
    "GeneticAlgorithm",
    "MaxGenerations",
    "PopulationSearch",
    "PsoParams",
    "RunConfig",
    "Stagnation",
    "WoaParams",
    "build_search",
    "canonical_name",
    "run_search",
]
