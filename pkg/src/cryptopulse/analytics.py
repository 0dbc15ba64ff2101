"""Per-coin label distributions, model-vs-human agreement, and reports.

Percentages are rounded half-away-from-zero to one decimal for display;
raw counts are always kept alongside so nothing is lost to rounding.
Agreement is unweighted Cohen's kappa between exactly two raters.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .backend import Classification
from .taxonomy import Label, TaskKind, labels_for


class TaskMismatchError(ValueError):
    """A classification's task differs from the one being tallied."""


class EmptyTotalError(ValueError):
    """A distribution row needs at least one counted item."""


class EmptyInputError(ValueError):
    """Agreement needs at least one pair."""


class MixedTasksError(ValueError):
    """All labels in an agreement computation must share one task."""


@dataclass(frozen=True)
class DistributionRow:
    coin: str
    task: TaskKind
    counts: dict[Label, int]
    percentages: dict[Label, float]
    total: int


@dataclass(frozen=True)
class KappaResult:
    task: TaskKind
    n_items: int
    p_o: float
    p_e: float
    kappa: float


# Column order of the published distribution tables, which the report
# mirrors; it differs from the prompt-vocabulary order.
REPORT_COLUMNS: dict[TaskKind, tuple[Label, ...]] = {
    TaskKind.PREDICTION: (
        Label.NON_PREDICTIVE,
        Label.PREDICTIVE_DECREMENTAL,
        Label.PREDICTIVE_INCREMENTAL,
        Label.PREDICTIVE_NEUTRAL,
    ),
    TaskKind.HOPE: (
        Label.NOT_HOPE,
        Label.UNREALISTIC_HOPE,
        Label.GENERALIZED_HOPE,
        Label.REALISTIC_HOPE,
    ),
    TaskKind.REGRET: (
        Label.NO_REGRET,
        Label.REGRET_BY_ACTION,
        Label.REGRET_BY_INACTION,
    ),
}


def tally(
    classifications: Iterable[Classification],
    task: TaskKind,
    coins: Mapping[str, str],
) -> dict[str, dict[Label, int]]:
    """Exact per-coin, per-label counts, zero-filled over the vocabulary.

    `coins` maps comment_id to coin; the classification records
    themselves do not carry the coin.
    """
    vocabulary = labels_for(task)
    result: dict[str, dict[Label, int]] = {}
    for record in classifications:
        if record.task is not task:
            raise TaskMismatchError(
                f"expected {task.value} classification,"
                f" got {record.task.value} for {record.comment_id}"
            )
        coin = coins.get(record.comment_id)
        if coin is None:
            raise ValueError(
                f"no coin known for comment {record.comment_id!r}"
            )
        if coin not in result:
            result[coin] = {label: 0 for label in vocabulary}
        result[coin][record.label] += 1
    return result


def _round1(numerator: int, denominator: int) -> float:
    """100 * numerator / denominator, half-away-from-zero to 1 decimal."""
    exact = Decimal(100 * numerator) / Decimal(denominator)
    return float(exact.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def to_percentages(
    counts: Mapping[Label, int], total: int, coin: str = ""
) -> DistributionRow:
    """Build a distribution row from counts that sum to total."""
    if total <= 0:
        raise EmptyTotalError("total must be > 0")
    tasks = {label.task for label in counts}
    if len(tasks) != 1:
        raise MixedTasksError("counts must cover exactly one task")
    task = tasks.pop()
    full = {label: int(counts.get(label, 0)) for label in labels_for(task)}
    if sum(full.values()) != total:
        raise ValueError(
            f"counts sum to {sum(full.values())}, expected total {total}"
        )
    percentages = {
        label: _round1(count, total) for label, count in full.items()
    }
    return DistributionRow(
        coin=coin, task=task, counts=full, percentages=percentages, total=total
    )


def cohen_kappa(pairs: Sequence[tuple[Label, Label]]) -> KappaResult:
    """Unweighted Cohen's kappa over (model_label, human_label) pairs.

    p_o is the fraction of equal pairs; p_e is the dot product of the two
    sides' marginal label distributions; kappa = (p_o - p_e) / (1 - p_e),
    with kappa = 1 when p_e = 1 (total marginal agreement forces p_o = 1).
    """
    if not pairs:
        raise EmptyInputError("no pairs")
    tasks = {label.task for pair in pairs for label in pair}
    if len(tasks) != 1:
        raise MixedTasksError("all labels must share one task")
    task = tasks.pop()
    n = len(pairs)
    agreements = sum(1 for model, human in pairs if model is human)
    p_o = agreements / n
    model_marginal: dict[Label, int] = {}
    human_marginal: dict[Label, int] = {}
    for model, human in pairs:
        model_marginal[model] = model_marginal.get(model, 0) + 1
        human_marginal[human] = human_marginal.get(human, 0) + 1
    p_e = sum(
        (model_marginal.get(label, 0) / n) * (human_marginal.get(label, 0) / n)
        for label in labels_for(task)
    )
    kappa = 1.0 if p_e == 1.0 else (p_o - p_e) / (1.0 - p_e)
    return KappaResult(task=task, n_items=n, p_o=p_o, p_e=p_e, kappa=kappa)


def render_report(
    rows: Sequence[DistributionRow],
    kappas: Sequence[KappaResult],
    out_dir: str | Path,
) -> list[Path]:
    """Write report.md plus one plot-ready CSV per task; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    lines = ["# Label distribution report", ""]
    for task in TaskKind:
        columns = REPORT_COLUMNS[task]
        task_rows = [row for row in rows if row.task is task]
        lines.append(f"## {task.value.capitalize()}")
        lines.append("")
        lines.append("| Coin | " + " | ".join(l.value for l in columns) + " |")
        lines.append("|" + " --- |" * (1 + len(columns)))
        for row in task_rows:
            cells = " | ".join(f"{row.percentages[l]:.1f}" for l in columns)
            lines.append(f"| {row.coin} | {cells} |")
        lines.append("")

    lines.append("## Agreement (Cohen's kappa)")
    lines.append("")
    lines.append("| Task | Items | Observed | Expected | Kappa |")
    lines.append("|" + " --- |" * 5)
    for result in kappas:
        lines.append(
            f"| {result.task.value} | {result.n_items}"
            f" | {result.p_o:.4f} | {result.p_e:.4f} | {result.kappa:.4f} |"
        )
    lines.append("")

    report_path = out_dir / "report.md"
    report_path.write_text("\n".join(lines), encoding="utf-8")
    written.append(report_path)

    for task in TaskKind:
        csv_path = out_dir / f"{task.value}.csv"
        with csv_path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["coin", "label", "count", "percent"])
            for row in rows:
                if row.task is not task:
                    continue
                for label in REPORT_COLUMNS[task]:
                    writer.writerow(
                        [
                            row.coin,
                            label.value,
                            row.counts[label],
                            f"{row.percentages[label]:.1f}",
                        ]
                    )
        written.append(csv_path)
    return written
