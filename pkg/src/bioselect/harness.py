"""End-to-end benchmark: select features once, then measure many retrainings.

The experiment runs in two phases. The selection phase draws one seeded
train/test split, cleans the training side with the full pipeline, and
runs each configured search algorithm once on it, yielding one feature
mask per algorithm. The measurement phase then runs ``repetitions``
independent rounds; each round draws a fresh split, fits the cleanup
pipeline on its training side only, replays it on the test side, and
trains every classifier on every feature set (the full set plus one per
algorithm), recording accuracy, precision, recall, F1, wall-clock training
time, and training cycles. Rounds are independent of each other, so the
aggregates do not depend on execution order; timing is measured with the
rounds running sequentially.

Every random decision derives from the experiment seed through tagged
subseeds, so a config file pins the entire experiment byte for byte
(timing aside).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import classifiers
from .classifiers import ClassifierSpec, default_specs
from .dataset import Dataset, FeatureMask, SplitSpec, load_csv, project, split
from .fitness import FitnessConfig, FitnessEvaluator, Holdout
from .optimizers import RunConfig, build_search, canonical_name
from .preprocess import PreprocessConfig, PreprocessPipeline

_SEED_MASK = (1 << 64) - 1


def subseed(seed: int, *tags: int) -> int:
    """Derive an independent 64-bit seed from the master seed and tags."""
    ss = np.random.SeedSequence([seed & _SEED_MASK, *tags])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    data: str = ""
    label_column: str = "diagnosis"
    algorithms: tuple[str, ...] = ("ga", "pso", "woa")
    repetitions: int = 100
    train_fraction: float = 0.7
    seed: int = 0
    agents: int = 20
    generations: int = 100
    alpha: float = 0.99
    evaluator_k: int = 10
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    classifiers: tuple[ClassifierSpec, ...] = field(default_factory=default_specs)

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")
        for a in self.algorithms:
            canonical_name(a)
        if not self.classifiers:
            raise ValueError("need at least one classifier")


_TOP_KEYS = {
    "data",
    "label_column",
    "algorithms",
    "repetitions",
    "train_fraction",
    "seed",
    "agents",
    "generations",
    "alpha",
    "evaluator_k",
    "preprocess",
    "classifiers",
}
_PREPROCESS_KEYS = {f.name for f in PreprocessConfig.__dataclass_fields__.values()}


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a config from parsed JSON, rejecting unknown keys loudly."""
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(raw)
    if "algorithms" in kwargs:
        kwargs["algorithms"] = tuple(kwargs["algorithms"])
    if "preprocess" in kwargs:
        praw = kwargs["preprocess"]
        bad = set(praw) - _PREPROCESS_KEYS
        if bad:
            raise ValueError(f"unknown preprocess keys: {sorted(bad)}")
        if "zero_as_missing" in praw:
            praw = dict(praw, zero_as_missing=tuple(praw["zero_as_missing"]))
        kwargs["preprocess"] = PreprocessConfig(**praw)
    if "classifiers" in kwargs:
        specs = []
        for entry in kwargs["classifiers"]:
            if isinstance(entry, str):
                specs.append(ClassifierSpec(entry))
            else:
                extra = set(entry) - {"kind", "params"}
                if extra:
                    raise ValueError(f"unknown classifier keys: {sorted(extra)}")
                if "kind" not in entry:
                    raise ValueError("classifier entry needs a kind")
                params = dict(entry.get("params", {}))
                if "hidden" in params:
                    params["hidden"] = tuple(params["hidden"])
                specs.append(ClassifierSpec(entry["kind"], params))
        kwargs["classifiers"] = tuple(specs)
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    with Path(path).open() as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    out = asdict(cfg)
    out["algorithms"] = list(cfg.algorithms)
    out["preprocess"] = dict(out["preprocess"])
    out["preprocess"]["zero_as_missing"] = list(cfg.preprocess.zero_as_missing)
    out["classifiers"] = [
        {"kind": s.kind, "params": _jsonable_params(s.params)} for s in cfg.classifiers
    ]
    return out


def _jsonable_params(params: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}


@dataclass
class SelectionOutcome:
    algorithm: str
    mask: FeatureMask
    fitness: float
    accuracy: float
    selected: int
    reduction_pct: float
    history: list[float]
    feature_names: list[str]


@dataclass
class CellStats:
    """Aggregates for one (feature set, classifier) pair over all rounds."""

    mean_accuracy: float
    std_accuracy: float
    mean_precision: float
    std_precision: float
    mean_recall: float
    std_recall: float
    mean_f1: float
    std_f1: float
    mean_time: float
    mean_cycles: float


@dataclass
class FeatureSetResult:
    name: str
    bits: list[int]
    selected: int
    reduction_pct: float
    cells: dict[str, CellStats]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    n_features: int
    feature_names: list[str]
    rows_raw: int
    class_counts_raw: dict[int, int]
    selection_report: dict[str, int]
    selections: list[SelectionOutcome]
    feature_sets: list[FeatureSetResult]
    fitness_calls: int
    fitness_computes: int

    def to_dict(self) -> dict:
        return {
            "config": config_to_dict(self.config),
            "dataset": {
                "n_features": self.n_features,
                "feature_names": self.feature_names,
                "rows_raw": self.rows_raw,
                "class_counts_raw": {str(k): v for k, v in self.class_counts_raw.items()},
            },
            "selection_report": dict(self.selection_report),
            "classifier_order": list(self.feature_sets[0].cells) if self.feature_sets else [],
            "selections": [
                {
                    "algorithm": s.algorithm,
                    "bits": s.mask.tolist(),
                    "fitness": s.fitness,
                    "accuracy": s.accuracy,
                    "selected": s.selected,
                    "reduction_pct": s.reduction_pct,
                    "history": list(s.history),
                    "feature_names": list(s.feature_names),
                }
                for s in self.selections
            ],
            "feature_sets": [
                {
                    "name": fs.name,
                    "bits": list(fs.bits),
                    "selected": fs.selected,
                    "reduction_pct": fs.reduction_pct,
                    "cells": {
                        kind: {
                            "mean_accuracy": c.mean_accuracy,
                            "std_accuracy": c.std_accuracy,
                            "mean_precision": c.mean_precision,
                            "std_precision": c.std_precision,
                            "mean_recall": c.mean_recall,
                            "std_recall": c.std_recall,
                            "mean_f1": c.mean_f1,
                            "std_f1": c.std_f1,
                            "mean_time": c.mean_time,
                            "mean_cycles": c.mean_cycles,
                        }
                        for kind, c in fs.cells.items()
                    },
                }
                for fs in self.feature_sets
            ],
            "fitness_calls": self.fitness_calls,
            "fitness_computes": self.fitness_computes,
        }


def _classifier_label(spec: ClassifierSpec, seen: dict[str, int]) -> str:
    """Stable unique label per roster entry (kind, kind_2, ...)."""
    count = seen.get(spec.kind, 0) + 1
    seen[spec.kind] = count
    return spec.kind if count == 1 else f"{spec.kind}_{count}"


def _check_leakage(train: Dataset, test: Dataset) -> None:
    if train.row_ids is None or test.row_ids is None:
        return
    real = set(train.row_ids[train.row_ids >= 0].tolist())
    held = set(test.row_ids.tolist())
    overlap = real & held
    if overlap:
        raise RuntimeError(
            f"train/test leakage: {len(overlap)} raw rows appear on both sides"
        )


def run_selection(
    data: Dataset, cfg: ExperimentConfig, progress: Callable[[str], None] | None = None
) -> tuple[list[SelectionOutcome], dict[str, int], FitnessEvaluator]:
    """Phase one: clean a seeded training split and search it once per algorithm."""
    sel_train, _ = split(
        data, SplitSpec(cfg.train_fraction, subseed(cfg.seed, 101), stratified=True)
    )
    pipeline = PreprocessPipeline(
        _with_seed(cfg.preprocess, subseed(cfg.seed, 105))
    )
    cleaned = pipeline.fit_transform(sel_train)
    evaluator = FitnessEvaluator(
        cleaned,
        FitnessConfig(
            alpha=cfg.alpha,
            evaluator_k=cfg.evaluator_k,
            validation=Holdout(fraction=cfg.train_fraction, seed=subseed(cfg.seed, 107)),
        ),
    )
    run_cfg = RunConfig(
        agents=cfg.agents, generations=cfg.generations, seed=subseed(cfg.seed, 106)
    )
    outcomes = []
    for algo in cfg.algorithms:
        name = canonical_name(algo)
        if progress:
            progress(f"selecting with {name} ({cfg.generations} generations)")
        history = build_search(name, evaluator, run_cfg).search()
        value = history.best_value
        mask = history.best_mask
        outcomes.append(
            SelectionOutcome(
                algorithm=name,
                mask=mask,
                fitness=value.fitness,
                accuracy=value.accuracy,
                selected=value.selected,
                reduction_pct=value.reduction_pct(),
                history=list(history.best_per_generation),
                feature_names=[data.feature_names[i] for i in mask.indices()],
            )
        )
    return outcomes, dict(pipeline.report_), evaluator


def _with_seed(pre: PreprocessConfig, seed: int) -> PreprocessConfig:
    return PreprocessConfig(**{**asdict(pre), "seed": seed})


def run_experiment(
    cfg: ExperimentConfig,
    data: Dataset | None = None,
    progress: Callable[[str], None] | None = None,
) -> ExperimentResult:
    if data is None:
        if not cfg.data:
            raise ValueError("config has no dataset path and no dataset was passed")
        data = load_csv(cfg.data, label_column=cfg.label_column)
    data = data.with_ids()

    selections, selection_report, evaluator = run_selection(data, cfg, progress)

    feature_sets: list[tuple[str, FeatureMask]] = [
        ("all", FeatureMask.ones(data.n_features))
    ]
    feature_sets += [(s.algorithm, s.mask) for s in selections]

    labels: list[str] = []
    seen: dict[str, int] = {}
    for spec in cfg.classifiers:
        labels.append(_classifier_label(spec, seen))

    shape = (len(feature_sets), len(cfg.classifiers), cfg.repetitions)
    acc = np.zeros(shape)
    prec = np.zeros(shape)
    rec = np.zeros(shape)
    f1 = np.zeros(shape)
    times = np.zeros(shape)
    cycles = np.zeros(shape)

    for rep in range(cfg.repetitions):
        if progress and (rep % 10 == 0 or rep == cfg.repetitions - 1):
            progress(f"measurement round {rep + 1}/{cfg.repetitions}")
        train, test = split(
            data,
            SplitSpec(cfg.train_fraction, subseed(cfg.seed, 202, rep), stratified=True),
        )
        pipeline = PreprocessPipeline(_with_seed(cfg.preprocess, subseed(cfg.seed, 404, rep)))
        train_c = pipeline.fit_transform(train)
        test_c = pipeline.transform(test)
        _check_leakage(train_c, test_c)
        for fi, (_, mask) in enumerate(feature_sets):
            tr = project(train_c, mask)
            te = project(test_c, mask)
            for ci, spec in enumerate(cfg.classifiers):
                fit_seed = subseed(cfg.seed, 303, rep, fi, ci)
                result = classifiers.fit(spec, tr, seed=fit_seed)
                m = classifiers.evaluate(result, te)
                acc[fi, ci, rep] = m.accuracy
                prec[fi, ci, rep] = m.precision
                rec[fi, ci, rep] = m.recall
                f1[fi, ci, rep] = m.f1
                times[fi, ci, rep] = result.train_time
                cycles[fi, ci, rep] = result.train_cycles

    fs_results = []
    for fi, (name, mask) in enumerate(feature_sets):
        cells = {}
        for ci, label in enumerate(labels):
            cells[label] = CellStats(
                mean_accuracy=float(acc[fi, ci].mean()),
                std_accuracy=float(acc[fi, ci].std()),
                mean_precision=float(prec[fi, ci].mean()),
                std_precision=float(prec[fi, ci].std()),
                mean_recall=float(rec[fi, ci].mean()),
                std_recall=float(rec[fi, ci].std()),
                mean_f1=float(f1[fi, ci].mean()),
                std_f1=float(f1[fi, ci].std()),
                mean_time=float(times[fi, ci].mean()),
                mean_cycles=float(cycles[fi, ci].mean()),
            )
        fs_results.append(
            FeatureSetResult(
                name=name,
                bits=mask.tolist(),
                selected=mask.popcount,
                reduction_pct=100.0 * mask.reduction(),
                cells=cells,
            )
        )

    return ExperimentResult(
        config=cfg,
        n_features=data.n_features,
        feature_names=list(data.feature_names),
        rows_raw=data.n_rows,
        class_counts_raw=data.class_counts(),
        selection_report=selection_report,
        selections=selections,
        feature_sets=fs_results,
        fitness_calls=evaluator.calls,
        fitness_computes=evaluator.computes,
    )
