"""Render per-step evaluation results to PNG figures.

Companion to the delimited output: given the same step results that feed
``write_results``, draw the metric totals, their decompositions and the
association counts over time, and save them next to the results file.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import METRIC_NAMES, StepResult

_COMPONENT_LABELS = (("localization", "tab:blue"), ("outline", "tab:orange"), ("cardinality", "tab:green"))


def _present_metrics(steps: Sequence[StepResult]) -> list[str]:
    if not steps:
        return []
    return [name for name in METRIC_NAMES if name in steps[0].results]


def render_report(steps: Iterable[StepResult], out_base) -> list[Path]:
    """Write totals, decomposition and count figures for a result series.

    Args:
        steps: evaluated step results, ordered by time.
        out_base: path prefix; files are written as ``{out_base}_totals.png``,
            ``{out_base}_components.png`` and ``{out_base}_counts.png``.

    Returns:
        The list of written file paths.
    """
    steps = list(steps)
    base = Path(out_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    times = [step.time for step in steps]
    metrics = _present_metrics(steps)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name in metrics:
        ax.plot(times, [step.results[name].total for step in steps], label=name, linewidth=1.4)
    ax.set_xlabel("step")
    ax.set_ylabel("distance")
    ax.set_title("Set distance per step")
    if metrics:
        ax.legend()
    ax.grid(True, alpha=0.3)
    path = base.parent / (base.name + "_totals.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    rows = max(len(metrics), 1)
    fig, axes = plt.subplots(rows, 1, figsize=(8, 2.8 * rows), sharex=True, squeeze=False)
    for ax, name in zip(axes.ravel(), metrics or [""]):
        if name:
            for component, color in _COMPONENT_LABELS:
                ax.plot(times, [getattr(step.results[name], component) for step in steps],
                        label=component, color=color, linewidth=1.2)
            ax.set_ylabel(name)
            ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
    axes.ravel()[-1].set_xlabel("step")
    fig.suptitle("Error decomposition per step")
    path = base.parent / (base.name + "_components.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    series = {
        "truth": [step.n_truth for step in steps],
        "estimate": [step.n_estimate for step in steps],
        "correct": [len(step.association.correct_pairs) for step in steps],
        "missing": [len(step.association.missing) for step in steps],
        "false": [len(step.association.false_targets) for step in steps],
    }
    for label, values in series.items():
        ax.step(times, values, where="mid", label=label, linewidth=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel("count")
    ax.set_title("Cardinalities and association counts")
    ax.legend()
    ax.grid(True, alpha=0.3)
    path = base.parent / (base.name + "_counts.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    return written
