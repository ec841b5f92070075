"""Shared helpers: small synthetic datasets with planted signal."""

from __future__ import annotations

import numpy as np
import pytest

from bioselect.dataset import Dataset


def planted_dataset(
    n: int = 100,
    n_features: int = 8,
    informative: int = 3,
    seed: int = 0,
    noise: float = 0.3,
) -> Dataset:
    """Linear signal in the first ``informative`` columns, noise elsewhere.

    Labels split at the median logit, so classes are balanced and every
    class has at least two rows for any n >= 4.
    """
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, n_features))
    w = rng.uniform(1.0, 2.0, informative) * rng.choice([-1.0, 1.0], informative)
    logits = X[:, :informative] @ w + noise * rng.normal(size=n)
    y = (logits > np.median(logits)).astype(np.int8)
    return Dataset(
        X=X,
        y=y,
        feature_names=tuple(f"f{i}" for i in range(n_features)),
        source=f"planted(seed={seed})",
    )


@pytest.fixture
def toy_data() -> Dataset:
    return planted_dataset(n=120, n_features=8, informative=3, seed=7)


@pytest.fixture
def toy_csv(tmp_path, toy_data):
    from bioselect.dataset import save_csv

    path = tmp_path / "toy.csv"
    save_csv(toy_data, path)
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one verdict line per acceptance criterion after the summary."""
    from tests._acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
