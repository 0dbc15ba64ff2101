"""Corpus ingestion, deduplication, seeded sampling, and persistence.

File formats, all UTF-8:
  - corpus: JSON lines with id, coin, text, optional created_at
  - classifications: JSON lines (one Classification per line)
  - annotations: CSV with header comment_id,task,label,annotator_id

Appends are idempotent where noted; loads are reentrant. Appending is a
single-writer affair by contract.
"""
from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .backend import Classification
from .preprocess import EmptyAfterCleaningError, preprocess
from .taxonomy import Label, TaskKind, parse_label


class SchemaError(ValueError):
    """A record is missing required fields or has the wrong shape."""


class DuplicateIdError(ValueError):
    """Two corpus records share an id."""


class InsufficientCommentsError(ValueError):
    def __init__(self, coin: str, available: int, requested: int):
        super().__init__(
            f"coin {coin!r} has {available} comments, {requested} requested"
        )
        self.coin = coin
        self.available = available
        self.requested = requested


@dataclass(frozen=True)
class Comment:
    id: str
    coin: str
    raw_text: str
    created_at: str | None = None


@dataclass(frozen=True)
class AnnotationRecord:
    comment_id: str
    task: TaskKind
    label: Label
    annotator_id: str


def load_corpus(path: str | Path) -> list[Comment]:
    """Parse a JSON-lines corpus; validation failures name their line."""
    comments: list[Comment] = []
    seen_ids: set[str] = set()
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {lineno}: invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise SchemaError(f"line {lineno}: expected an object")
            missing = [k for k in ("id", "coin", "text") if not obj.get(k)]
            if missing:
                raise SchemaError(
                    f"line {lineno}: missing field(s) {', '.join(missing)}"
                )
            comment_id = str(obj["id"])
            if comment_id in seen_ids:
                raise DuplicateIdError(
                    f"line {lineno}: duplicate id {comment_id!r}"
                )
            seen_ids.add(comment_id)
            comments.append(
                Comment(
                    id=comment_id,
                    coin=str(obj["coin"]),
                    raw_text=str(obj["text"]),
                    created_at=obj.get("created_at"),
                )
            )
    return comments


def dedupe(comments: list[Comment]) -> list[Comment]:
    """Drop comments whose cleaned text repeats an earlier comment's.

    First occurrence wins; order is preserved. Comments that clean to
    empty have no cleaned text to compare, so they are kept (the classify
    stage counts them as exclusions).
    """
    seen: set[str] = set()
    kept: list[Comment] = []
    for comment in comments:
        try:
            key = preprocess(comment.raw_text).text
        except EmptyAfterCleaningError:
            kept.append(comment)
            continue
        if key in seen:
            continue
        seen.add(key)
        kept.append(comment)
    return kept


def sample_per_coin(
    comments: list[Comment], n: int, seed: int
) -> list[Comment]:
    """Draw exactly n comments per coin, uniformly without replacement.

    Each coin gets its own generator seeded by (seed, coin), so a coin's
    sample does not depend on which other coins are present. Output is
    grouped by coin (coins in first-appearance order), each group in draw
    order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    by_coin: dict[str, list[Comment]] = {}
    for comment in comments:
        by_coin.setdefault(comment.coin, []).append(comment)
    sampled: list[Comment] = []
    for coin, group in by_coin.items():
        if len(group) < n:
            raise InsufficientCommentsError(coin, len(group), n)
        rng = random.Random(f"{seed}|{coin}")
        sampled.extend(rng.sample(group, n))
    return sampled


def _classification_to_obj(record: Classification) -> dict:
    return {
        "comment_id": record.comment_id,
        "task": record.task.value,
        "label": record.label.value,
        "backend_id": record.backend_id,
        "model_name": record.model_name,
        "cached": record.cached,
        "raw_response": record.raw_response,
        "timestamp": record.timestamp,
    }


def _classification_from_obj(obj: dict, where: str) -> Classification:
    try:
        task = TaskKind(obj["task"])
        return Classification(
            comment_id=obj["comment_id"],
            task=task,
            label=parse_label(task, obj["label"]),
            backend_id=obj["backend_id"],
            model_name=obj["model_name"],
            cached=bool(obj["cached"]),
            raw_response=obj["raw_response"],
            timestamp=obj["timestamp"],
        )
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def append_classifications(
    path: str | Path, records: list[Classification]
) -> int:
    """Append records not already on disk; returns the number written.

    A record is "already seen" when its (comment_id, task, model_name)
    triple exists in the file, so re-running a classify stage is a no-op.
    """
    path = Path(path)
    seen: set[tuple[str, str, str]] = set()
    if path.exists():
        for record in load_classifications(path):
            seen.add((record.comment_id, record.task.value, record.model_name))
    written = 0
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as fh:
        for record in records:
            triple = (record.comment_id, record.task.value, record.model_name)
            if triple in seen:
                continue
            seen.add(triple)
            fh.write(
                json.dumps(_classification_to_obj(record), ensure_ascii=False)
                + "\n"
            )
            written += 1
    return written


def load_classifications(path: str | Path) -> list[Classification]:
    records: list[Classification] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {lineno}: invalid JSON: {exc}") from exc
            records.append(_classification_from_obj(obj, f"line {lineno}"))
    return records


_ANNOTATION_HEADER = ["comment_id", "task", "label", "annotator_id"]


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    """Parse the annotations CSV; label errors name their row."""
    records: list[AnnotationRecord] = []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("annotations file has no header") from None
        if header != _ANNOTATION_HEADER:
            raise SchemaError(
                f"expected header {','.join(_ANNOTATION_HEADER)},"
                f" got {','.join(header)}"
            )
        for rowno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 4:
                raise SchemaError(f"row {rowno}: expected 4 columns")
            comment_id, task_text, label_text, annotator_id = row
            try:
                task = TaskKind(task_text)
            except ValueError as exc:
                raise SchemaError(
                    f"row {rowno}: unknown task {task_text!r}"
                ) from exc
            try:
                label = parse_label(task, label_text)
            except ValueError as exc:
                raise SchemaError(f"row {rowno}: {exc}") from exc
            records.append(
                AnnotationRecord(
                    comment_id=comment_id,
                    task=task,
                    label=label,
                    annotator_id=annotator_id,
                )
            )
    return records


def append_annotations(
    path: str | Path, records: list[AnnotationRecord]
) -> int:
    """Append annotation rows, creating the file with a header if needed.

    Idempotent on (comment_id, task, annotator_id).
    """
    path = Path(path)
    seen: set[tuple[str, str, str]] = set()
    if path.exists():
        for existing in load_annotations(path):
            seen.add(
                (existing.comment_id, existing.task.value, existing.annotator_id)
            )
    path.parent.mkdir(parents=True, exist_ok=True)
    is_new = not path.exists()
    written = 0
    with path.open("a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if is_new:
            writer.writerow(_ANNOTATION_HEADER)
        for record in records:
            triple = (record.comment_id, record.task.value, record.annotator_id)
            if triple in seen:
                continue
            seen.add(triple)
            writer.writerow(
                [
                    record.comment_id,
                    record.task.value,
                    record.label.value,
                    record.annotator_id,
                ]
            )
            written += 1
    return written
