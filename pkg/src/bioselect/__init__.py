"""Wrapper feature selection with bio-inspired binary optimizers.

The package bundles three population-based search algorithms (genetic
algorithm, binary particle swarm, binary whale optimization), a KNN-based
fitness function that trades classification accuracy against feature count,
a small zoo of from-scratch classifiers, a tabular preprocessing pipeline,
and a benchmark harness with a CLI front end (``bioselect``).
"""

from .dataset import Dataset, FeatureMask, SplitSpec, load_csv, save_csv, split
from .fitness import FitnessConfig, FitnessEvaluator, FitnessValue, Holdout, KFold

__all__ = [
    "Dataset",
    "FeatureMask",
    "SplitSpec",
    "load_csv",
    "save_csv",
    "split",
    "FitnessConfig",
    "FitnessEvaluator",
    "FitnessValue",
    "Holdout",
    "KFold",
]

__version__ = "0.1.0"
