"""Render benchmark results to Markdown, CSV, JSON, and figures.

Everything renders from the plain-dict form of an experiment result, so a
saved ``report.json`` can be re-rendered later and reproduces the same
files. The JSON files are written with sorted keys; stripping the timing
fields (``deterministic_view``) yields output that is byte-identical
across repeated runs of the same configuration.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_TIMING_KEYS = {"mean_time", "time_delta_pct", "train_time"}

# cleanup counters in pipeline stage order; report.json stores dicts with
# sorted keys, so row order must not depend on dict insertion order
_STAGE_ORDER = (
    "rows_in",
    "zeros_marked",
    "duplicates_removed",
    "outlier_cells",
    "cells_imputed",
    "rows_synthesized",
    "rows_removed_enn",
    "rows_out",
)


def deterministic_view(node):
    """Recursively drop wall-clock fields; what remains is run-stable."""
    if isinstance(node, dict):
        return {
            k: deterministic_view(v) for k, v in node.items() if k not in _TIMING_KEYS
        }
    if isinstance(node, list):
        return [deterministic_view(v) for v in node]
    return node


def dump_json(node, path: Path) -> None:
    path.write_text(json.dumps(node, sort_keys=True, indent=2) + "\n")


def _pct(x: float) -> str:
    return f"{100.0 * x:.1f}%"


def _pct_delta(x: float, base: float) -> str:
    return f"{100.0 * x:.1f}% ({100.0 * (x - base):+.1f})"


def _time(seconds: float) -> str:
    return f"{seconds * 1000.0:.3g} ms"


def _time_delta(seconds: float, base: float) -> str:
    if base <= 0:
        return _time(seconds)
    return f"{_time(seconds)} ({100.0 * (seconds - base) / base:+.1f}%)"


def _classifier_order(result: dict) -> list[str]:
    order = result.get("classifier_order")
    if order:
        return list(order)
    return sorted(result["feature_sets"][0]["cells"])


def render_markdown(result: dict) -> str:
    cfg = result["config"]
    ds = result["dataset"]
    lines: list[str] = []
    lines.append(f"# Feature selection benchmark: {cfg['data'] or 'in-memory dataset'}")
    lines.append("")
    lines.append(
        f"{ds['rows_raw']} rows, {ds['n_features']} features, "
        f"{cfg['repetitions']} measurement rounds, seed {cfg['seed']}."
    )
    lines.append("")

    lines.append("## Cleanup of the selection split")
    lines.append("")
    lines.append("| step | count |")
    lines.append("| --- | ---: |")
    report = result["selection_report"]
    keys = [k for k in _STAGE_ORDER if k in report]
    keys += sorted(set(report) - set(_STAGE_ORDER))
    for key in keys:
        lines.append(f"| {key} | {report[key]} |")
    lines.append("")

    lines.append("## Selected feature sets")
    lines.append("")
    lines.append("| set | selected | reduction | fitness | selection accuracy |")
    lines.append("| --- | ---: | ---: | ---: | ---: |")
    n = ds["n_features"]
    lines.append(f"| all | {n} | 0.0% | - | - |")
    for sel in result["selections"]:
        lines.append(
            f"| {sel['algorithm']} | {sel['selected']} "
            f"| {sel['reduction_pct']:.1f}% | {sel['fitness']:.4f} "
            f"| {_pct(sel['accuracy'])} |"
        )
    lines.append("")
    for sel in result["selections"]:
        names = ", ".join(sel["feature_names"])
        lines.append(f"- **{sel['algorithm']}** kept: {names}")
    lines.append("")

    order = _classifier_order(result)
    sets = result["feature_sets"]
    base = sets[0]

    lines.append(f"## Test accuracy (mean of {cfg['repetitions']} rounds)")
    lines.append("")
    lines.append("| classifier | " + " | ".join(fs["name"] for fs in sets) + " |")
    lines.append("| --- |" + " ---: |" * len(sets))
    for kind in order:
        row = [kind]
        base_acc = base["cells"][kind]["mean_accuracy"]
        for fs in sets:
            acc = fs["cells"][kind]["mean_accuracy"]
            row.append(_pct(acc) if fs is base else _pct_delta(acc, base_acc))
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")

    lines.append("## Mean training time")
    lines.append("")
    lines.append("| classifier | " + " | ".join(fs["name"] for fs in sets) + " |")
    lines.append("| --- |" + " ---: |" * len(sets))
    for kind in order:
        row = [kind]
        base_t = base["cells"][kind]["mean_time"]
        for fs in sets:
            t = fs["cells"][kind]["mean_time"]
            row.append(_time(t) if fs is base else _time_delta(t, base_t))
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")

    iterative = [
        k for k in order if any(fs["cells"][k]["mean_cycles"] > 1 for fs in sets)
    ]
    if iterative:
        lines.append("## Mean training cycles (iterative models)")
        lines.append("")
        lines.append("| classifier | " + " | ".join(fs["name"] for fs in sets) + " |")
        lines.append("| --- |" + " ---: |" * len(sets))
        for kind in iterative:
            row = [kind] + [f"{fs['cells'][kind]['mean_cycles']:.1f}" for fs in sets]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")

    lines.append("## Files")
    lines.append("")
    lines.append("- report.csv: every aggregate as one row per (set, classifier)")
    lines.append("- report.json: full machine-readable result")
    lines.append("- summary.json: headline numbers only")
    lines.append("- masks.json: selected feature masks")
    lines.append("- history_<algorithm>.csv: best fitness per generation")
    lines.append("- fig_convergence.png, fig_accuracy.png, fig_time_delta.png")
    lines.append("")
    return "\n".join(lines)


def write_csv(result: dict, path: Path) -> None:
    order = _classifier_order(result)
    base = result["feature_sets"][0]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "feature_set",
                "classifier",
                "mean_accuracy",
                "std_accuracy",
                "mean_precision",
                "std_precision",
                "mean_recall",
                "std_recall",
                "mean_f1",
                "std_f1",
                "mean_time_s",
                "time_delta_pct",
                "mean_cycles",
            ]
        )
        for fs in result["feature_sets"]:
            for kind in order:
                c = fs["cells"][kind]
                base_t = base["cells"][kind]["mean_time"]
                if fs is base or base_t <= 0:
                    delta = ""
                else:
                    delta = repr(100.0 * (c["mean_time"] - base_t) / base_t)
                writer.writerow(
                    [
                        fs["name"],
                        kind,
                        repr(c["mean_accuracy"]),
                        repr(c["std_accuracy"]),
                        repr(c["mean_precision"]),
                        repr(c["std_precision"]),
                        repr(c["mean_recall"]),
                        repr(c["std_recall"]),
                        repr(c["mean_f1"]),
                        repr(c["std_f1"]),
                        repr(c["mean_time"]),
                        delta,
                        repr(c["mean_cycles"]),
                    ]
                )


def write_history_csv(history: list[float], path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["generation", "best_fitness"])
        for g, f in enumerate(history, start=1):
            writer.writerow([g, repr(float(f))])


def masks_payload(result: dict) -> dict:
    ds = result["dataset"]
    return {
        "n_features": ds["n_features"],
        "feature_names": ds["feature_names"],
        "masks": {
            sel["algorithm"]: {
                "bits": sel["bits"],
                "selected": sel["selected"],
                "reduction_pct": sel["reduction_pct"],
                "fitness": sel["fitness"],
                "features": sel["feature_names"],
            }
            for sel in result["selections"]
        },
    }


def summary_payload(result: dict) -> dict:
    cfg = result["config"]
    order = _classifier_order(result)
    headline = {}
    for fs in result["feature_sets"]:
        best_kind = max(order, key=lambda k: fs["cells"][k]["mean_accuracy"])
        headline[fs["name"]] = {
            "selected": fs["selected"],
            "reduction_pct": fs["reduction_pct"],
            "best_classifier": best_kind,
            "best_mean_accuracy": fs["cells"][best_kind]["mean_accuracy"],
        }
    return {
        "data": cfg["data"],
        "seed": cfg["seed"],
        "repetitions": cfg["repetitions"],
        "algorithms": [s["algorithm"] for s in result["selections"]],
        "feature_sets": headline,
    }


def plot_convergence(result: dict, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for sel in result["selections"]:
        gens = range(1, len(sel["history"]) + 1)
        ax.plot(gens, sel["history"], label=sel["algorithm"], linewidth=1.6)
    ax.set_xlabel("generation")
    ax.set_ylabel("best fitness")
    ax.set_title("Selection convergence")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_accuracy(result: dict, path: Path) -> None:
    order = _classifier_order(result)
    sets = result["feature_sets"]
    width = 0.8 / len(sets)
    x = range(len(order))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, fs in enumerate(sets):
        means = [fs["cells"][k]["mean_accuracy"] for k in order]
        stds = [fs["cells"][k]["std_accuracy"] for k in order]
        pos = [xi + (i - (len(sets) - 1) / 2) * width for xi in x]
        ax.bar(pos, means, width=width, yerr=stds, capsize=2, label=fs["name"])
    ax.set_xticks(list(x))
    ax.set_xticklabels(order)
    ax.set_ylabel("mean test accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("Accuracy by classifier and feature set")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_time_delta(result: dict, path: Path) -> None:
    order = _classifier_order(result)
    sets = result["feature_sets"]
    base = sets[0]
    rest = sets[1:]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if rest:
        width = 0.8 / len(rest)
        x = range(len(order))
        for i, fs in enumerate(rest):
            deltas = []
            for k in order:
                bt = base["cells"][k]["mean_time"]
                t = fs["cells"][k]["mean_time"]
                deltas.append(100.0 * (t - bt) / bt if bt > 0 else 0.0)
            pos = [xi + (i - (len(rest) - 1) / 2) * width for xi in x]
            ax.bar(pos, deltas, width=width, label=fs["name"])
        ax.set_xticks(list(x))
        ax.set_xticklabels(order)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_ylabel("training time change vs all features (%)")
    ax.set_title("Training cost after selection")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(result: dict, out_dir: str | Path, figures: bool = True) -> list[Path]:
    """Write every report artifact for one result dict; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    md = out / "report.md"
    md.write_text(render_markdown(result))
    written.append(md)

    csv_path = out / "report.csv"
    write_csv(result, csv_path)
    written.append(csv_path)

    rj = out / "report.json"
    dump_json(result, rj)
    written.append(rj)

    sj = out / "summary.json"
    dump_json(summary_payload(result), sj)
    written.append(sj)

    mj = out / "masks.json"
    dump_json(masks_payload(result), mj)
    written.append(mj)

    for sel in result["selections"]:
        hp = out / f"history_{sel['algorithm']}.csv"
        write_history_csv(sel["history"], hp)
        written.append(hp)

    if figures:
        for name, fn in (
            ("fig_convergence.png", plot_convergence),
            ("fig_accuracy.png", plot_accuracy),
            ("fig_time_delta.png", plot_time_delta),
        ):
            p = out / name
            fn(result, p)
            written.append(p)
    return written
