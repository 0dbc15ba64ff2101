"""Closed label vocabularies for the three classification tasks.

Three tasks, eleven labels total. The canonical surface strings are the
ones the prompts enumerate and every file format serializes; keeping them
frozen here in one place means prompt text and reports stay byte-stable
across runs. Parsing is deliberately a little tolerant (chat models like
to decorate their answers) but never silently coerces: anything outside
the vocabulary surfaces as UnknownLabelError.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TaskKind(Enum):
    PREDICTION = "prediction"
    HOPE = "hope"
    REGRET = "regret"


class Label(Enum):
    PREDICTIVE_INCREMENTAL = "Predictive Incremental"
    PREDICTIVE_DECREMENTAL = "Predictive Decremental"
    PREDICTIVE_NEUTRAL = "Predictive Neutral"
    NON_PREDICTIVE = "Non-Predictive"
    GENERALIZED_HOPE = "Generalized Hope"
    NOT_HOPE = "Not Hope"
    REALISTIC_HOPE = "Realistic Hope"
    UNREALISTIC_HOPE = "Unrealistic Hope"
    REGRET_BY_ACTION = "Regret by Action"
    REGRET_BY_INACTION = "Regret by Inaction"
    NO_REGRET = "No Regret"

    @property
    def task(self) -> TaskKind:
        return _TASK_OF_LABEL[self]


# Vocabulary order is the order the prompts enumerate the labels.
_VOCABULARY: dict[TaskKind, tuple[Label, ...]] = {
    TaskKind.PREDICTION: (
        Label.PREDICTIVE_INCREMENTAL,
        Label.PREDICTIVE_DECREMENTAL,
        Label.PREDICTIVE_NEUTRAL,
        Label.NON_PREDICTIVE,
    ),
    TaskKind.HOPE: (
        Label.GENERALIZED_HOPE,
        Label.NOT_HOPE,
        Label.REALISTIC_HOPE,
        Label.UNREALISTIC_HOPE,
    ),
    TaskKind.REGRET: (
        Label.REGRET_BY_ACTION,
        Label.REGRET_BY_INACTION,
        Label.NO_REGRET,
    ),
}

_TASK_OF_LABEL: dict[Label, TaskKind] = {
    label: task for task, labels in _VOCABULARY.items() for label in labels
}


class UnknownLabelError(ValueError):
    """Response text matches no label in the task's vocabulary."""


class AmbiguousLabelError(ValueError):
    """Response text contains two or more distinct canonical labels."""


def labels_for(task: TaskKind) -> list[Label]:
    """Full vocabulary for a task, in fixed prompt order."""
    return list(_VOCABULARY[task])


def canonical_string(label: Label) -> str:
    """The exact surface form used in prompts and files."""
    return label.value


def parse_label(task: TaskKind, text: str) -> Label:
    """Parse a response into a label of the task's vocabulary.

    Matching is forgiving in three fixed ways: surrounding whitespace is
    trimmed, one trailing period is stripped, and comparison is
    case-insensitive. If that yields no exact match, a response containing
    exactly one canonical label as a substring is accepted (a match lying
    strictly inside a longer match, e.g. "Realistic Hope" inside
    "Unrealistic Hope", does not count).

    Raises UnknownLabelError when nothing matches and AmbiguousLabelError
    when two or more distinct labels are present.
    """
    cleaned = text.strip()
    if cleaned.endswith("."):
        cleaned = cleaned[:-1]
    folded = cleaned.casefold()
    for label in _VOCABULARY[task]:
        if folded == label.value.casefold():
            return label

    # Substring fallback: collect every occurrence, then drop occurrences
    # strictly contained in a longer one so nested canonicals don't
    # masquerade as ambiguity.
    haystack = text.casefold()
    spans: list[tuple[int, int, Label]] = []
    for label in _VOCABULARY[task]:
        needle = label.value.casefold()
        start = haystack.find(needle)
        while start != -1:
            spans.append((start, start + len(needle), label))
            start = haystack.find(needle, start + 1)
    kept = [
        (s, e, label)
        for s, e, label in spans
        if not any(
            (os <= s and e <= oe) and (oe - os > e - s)
            for os, oe, _ in spans
        )
    ]
    found = {label for _, _, label in kept}
    if not found:
        raise UnknownLabelError(f"no {task.value} label in response: {text!r}")
    if len(found) > 1:
        names = ", ".join(sorted(label.value for label in found))
        raise AmbiguousLabelError(f"multiple labels in response: {names}")
    return found.pop()


@dataclass(frozen=True)
class FewShotExample:
    task: TaskKind
    comment_text: str
    label: Label


# Built-in few-shot examples, verbatim and in table order. The one
# two-sentence cell ("... or ...") is stored as two examples with the same
# label so every example is a single comment.
_EXAMPLES: dict[TaskKind, tuple[FewShotExample, ...]] = {
    TaskKind.PREDICTION: (
        FewShotExample(
            TaskKind.PREDICTION,
            "Profits are expected to double by the end of the year.",
            Label.PREDICTIVE_INCREMENTAL,
        ),
        FewShotExample(
            TaskKind.PREDICTION,
            "Due to the recent economic downturn, we anticipate a decrease"
            " in consumer spending next quarter.",
            Label.PREDICTIVE_DECREMENTAL,
        ),
        FewShotExample(
            TaskKind.PREDICTION,
            "The company expects revenue to remain consistent in the"
            " upcoming quarter.",
            Label.PREDICTIVE_NEUTRAL,
        ),
        FewShotExample(
            TaskKind.PREDICTION,
            "There is uncertainty regarding future market conditions.",
            Label.PREDICTIVE_NEUTRAL,
        ),
        FewShotExample(
            TaskKind.PREDICTION,
            "Blockchain technology is revolutionizing various industries"
            " worldwide.",
            Label.NON_PREDICTIVE,
        ),
    ),
    TaskKind.HOPE: (
        FewShotExample(
            TaskKind.HOPE,
            "Excited about the future of cryptocurrencies! The innovation"
            " and potential in this space are truly remarkable.",
            Label.GENERALIZED_HOPE,
        ),
        FewShotExample(
            TaskKind.HOPE,
            "I doubt this coin will ever increase in value.",
            Label.NOT_HOPE,
        ),
        FewShotExample(
            TaskKind.HOPE,
            "With the recent trends, it's likely that Bitcoin will hit a"
            " new high.",
            Label.REALISTIC_HOPE,
        ),
        FewShotExample(
            TaskKind.HOPE,
            "I'm sure this tiny investment will make me a millionaire"
            " overnight.",
            Label.UNREALISTIC_HOPE,
        ),
    ),
    TaskKind.REGRET: (
        FewShotExample(
            TaskKind.REGRET,
            "I regret buying that coin, it's lost so much value.",
            Label.REGRET_BY_ACTION,
        ),
        FewShotExample(
            TaskKind.REGRET,
            "I should have bought that coin when it was cheaper, now it's"
            " too late.",
            Label.REGRET_BY_INACTION,
        ),
        FewShotExample(
            TaskKind.REGRET,
            "I'm glad I didn't invest in that coin, it's crashing.",
            Label.NO_REGRET,
        ),
    ),
}


def builtin_examples(task: TaskKind) -> list[FewShotExample]:
    """The built-in few-shot examples for a task, in table order."""
    return list(_EXAMPLES[task])
