"""Few-shot sentiment classification of cryptocurrency discussions."""

from .taxonomy import (
    FewShotExample,
    Label,
    TaskKind,
    builtin_examples,
    canonical_string,
    labels_for,
    parse_label,
)

__all__ = [
    "FewShotExample",
    "Label",
    "TaskKind",
    "builtin_examples",
    "canonical_string",
    "labels_for",
    "parse_label",
]
