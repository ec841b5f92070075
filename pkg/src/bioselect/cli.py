"""Command line front end.

Subcommands:
    preprocess  clean a CSV in place (whole-file semantics) and write it back
    select      run one or all search algorithms on a cleaned dataset
    oracle      exhaustively score every mask on a small dataset
    benchmark   full selection + repeated-measurement experiment
    report      re-render report files from a saved report.json

Every failure exits nonzero with a message tagged by the stage that died.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .dataset import load_csv, save_csv
from .fitness import FitnessConfig, FitnessEvaluator, Holdout, brute_force_best
from .harness import (
    ExperimentConfig,
    config_from_dict,
    load_config,
    run_experiment,
    subseed,
)
from .optimizers import ALGORITHMS, RunConfig, build_search, canonical_name
from .preprocess import PreprocessPipeline
from .report import dump_json, render_report, write_history_csv


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"error [{stage}]: {cause}")
        self.stage = stage


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    with _stage("config"):
        if getattr(args, "config", None):
            cfg = load_config(args.config)
        else:
            cfg = config_from_dict({})
        overrides = {}
        if getattr(args, "data", None):
            overrides["data"] = args.data
        if getattr(args, "label_column", None):
            overrides["label_column"] = args.label_column
        if getattr(args, "seed", None) is not None:
            overrides["seed"] = args.seed
        if getattr(args, "agents", None) is not None:
            overrides["agents"] = args.agents
        if getattr(args, "generations", None) is not None:
            overrides["generations"] = args.generations
        if getattr(args, "repetitions", None) is not None:
            overrides["repetitions"] = args.repetitions
        if overrides:
            from dataclasses import replace

            cfg = replace(cfg, **overrides)
        return cfg


def _load_and_clean(cfg: ExperimentConfig):
    with _stage("load"):
        data = load_csv(cfg.data, label_column=cfg.label_column)
    with _stage("preprocess"):
        pipeline = PreprocessPipeline(cfg.preprocess)
        cleaned = pipeline.fit_transform(data)
    return data, cleaned, pipeline


def cmd_preprocess(args: argparse.Namespace) -> int:
    cfg = _experiment_config(args)
    data, cleaned, pipeline = _load_and_clean(cfg)
    with _stage("write"):
        save_csv(cleaned, args.output, label_column=cfg.label_column)
    for key, val in pipeline.report_.items():
        print(f"{key}: {val}")
    print(f"wrote {args.output}")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    cfg = _experiment_config(args)
    data, cleaned, _ = _load_and_clean(cfg)
    with _stage("config"):
        names = (
            list(ALGORITHMS)
            if args.algorithm == "all"
            else [canonical_name(args.algorithm)]
        )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _stage("select"):
        evaluator = FitnessEvaluator(
            cleaned,
            FitnessConfig(
                alpha=cfg.alpha,
                evaluator_k=cfg.evaluator_k,
                validation=Holdout(
                    fraction=cfg.train_fraction, seed=subseed(cfg.seed, 107)
                ),
            ),
        )
        run_cfg = RunConfig(
            agents=cfg.agents, generations=cfg.generations, seed=subseed(cfg.seed, 106)
        )
        masks = {}
        for name in names:
            history = build_search(name, evaluator, run_cfg).search()
            value = history.best_value
            masks[name] = {
                "bits": history.best_mask.tolist(),
                "selected": value.selected,
                "reduction_pct": value.reduction_pct(),
                "fitness": value.fitness,
                "accuracy": value.accuracy,
                "features": [
                    data.feature_names[i] for i in history.best_mask.indices()
                ],
            }
            write_history_csv(
                history.best_per_generation, out_dir / f"history_{name}.csv"
            )
            print(
                f"{name}: fitness {value.fitness:.4f}, accuracy {value.accuracy:.4f}, "
                f"{value.selected}/{data.n_features} features "
                f"({value.reduction_pct():.1f}% reduction)"
            )
    with _stage("write"):
        dump_json(
            {
                "n_features": data.n_features,
                "feature_names": list(data.feature_names),
                "masks": masks,
            },
            out_dir / "masks.json",
        )
    print(f"wrote {out_dir / 'masks.json'}")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _experiment_config(args)
    data, cleaned, _ = _load_and_clean(cfg)
    with _stage("oracle"):
        evaluator = FitnessEvaluator(
            cleaned,
            FitnessConfig(
                alpha=cfg.alpha,
                evaluator_k=cfg.evaluator_k,
                validation=Holdout(
                    fraction=cfg.train_fraction, seed=subseed(cfg.seed, 107)
                ),
            ),
        )
        rows = []

        def keep(bits, value):
            rows.append(
                (
                    "".join(str(int(b)) for b in bits),
                    value.selected,
                    value.accuracy,
                    value.fitness,
                )
            )

        best_mask, best_value = brute_force_best(
            evaluator=evaluator, max_n=args.max_n, collect=keep
        )
    with _stage("write"):
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["bits", "selected", "accuracy", "fitness"])
            for row in rows:
                writer.writerow([row[0], row[1], repr(row[2]), repr(row[3])])
    print(
        f"best mask {best_mask!r}: fitness {best_value.fitness:.6f}, "
        f"accuracy {best_value.accuracy:.6f}, "
        f"{best_value.selected}/{data.n_features} features"
    )
    print(f"wrote {args.out} ({len(rows)} masks)")
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    cfg = _experiment_config(args)
    if not cfg.data:
        raise StageError("config", ValueError("no dataset given (positional or config)"))
    progress = None if args.quiet else lambda msg: print(msg, file=sys.stderr)
    with _stage("load"):
        data = load_csv(cfg.data, label_column=cfg.label_column)
    with _stage("benchmark"):
        result = run_experiment(cfg, data=data, progress=progress)
    with _stage("report"):
        written = render_report(
            result.to_dict(), args.out_dir, figures=not args.no_figures
        )
    for sel in result.selections:
        print(
            f"{sel.algorithm}: {sel.selected}/{result.n_features} features, "
            f"fitness {sel.fitness:.4f}"
        )
    print(f"wrote {len(written)} files to {args.out_dir}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    with _stage("load"):
        with open(args.results) as fh:
            result = json.load(fh)
        if not isinstance(result, dict) or "feature_sets" not in result:
            raise ValueError(f"{args.results} is not a benchmark report.json")
    with _stage("report"):
        written = render_report(result, args.out_dir, figures=not args.no_figures)
    print(f"wrote {len(written)} files to {args.out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bioselect",
        description="Wrapper feature selection with bio-inspired search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data_required=True):
        if data_required:
            p.add_argument("data", help="input CSV with a header row")
        else:
            p.add_argument("data", nargs="?", default=None, help="input CSV")
        p.add_argument("--config", help="JSON experiment config", default=None)
        p.add_argument("--label-column", default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("preprocess", help="clean a CSV and write the result")
    common(p)
    p.add_argument("output", help="path for the cleaned CSV")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("select", help="search for a feature subset")
    common(p)
    p.add_argument(
        "--algorithm",
        default="all",
        help="ga, pso/bpso, woa/bwoa, or all (default all)",
    )
    p.add_argument("--agents", type=int, default=None)
    p.add_argument("--generations", type=int, default=None)
    p.add_argument("--out-dir", default=".", help="where to write masks and histories")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("oracle", help="score every mask exhaustively")
    common(p)
    p.add_argument("--out", default="oracle.csv", help="enumeration CSV path")
    p.add_argument("--max-n", type=int, default=16, help="refuse more features than this")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("benchmark", help="full selection + measurement experiment")
    common(p, data_required=False)
    p.add_argument("--agents", type=int, default=None)
    p.add_argument("--generations", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--out-dir", default="benchmark_out")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("report", help="re-render files from a saved report.json")
    p.add_argument("results", help="path to report.json")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
