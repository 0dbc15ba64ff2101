"""Command-line pipeline: synth, classify, annotate, agree, report.

Stages communicate through files under the output directory so each one
is separately re-runnable and auditable:

    corpus.jsonl          (synth / your own corpus)
    classifications.jsonl (classify; idempotent append)
    annotations.csv       (annotate)
    report.md, prediction.csv, hope.csv, regret.csv (report)
    cache.jsonl           (remote-backend response cache)

Exit codes: 0 success, 1 usage error, 2 I/O or schema error, 3 backend
failure. The remote credential is read only from the environment.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from .analytics import (
    KappaResult,
    cohen_kappa,
    render_report,
    tally,
    to_percentages,
)
from .backend import (
    AuthError,
    BackendConfig,
    Classifier,
    TransportError,
    UnparsableResponseError,
)
from .corpus import (
    AnnotationRecord,
    DuplicateIdError,
    InsufficientCommentsError,
    SchemaError,
    append_annotations,
    append_classifications,
    dedupe,
    load_annotations,
    load_classifications,
    load_corpus,
    sample_per_coin,
)
from .synth import write_corpus
from .taxonomy import TaskKind, labels_for

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_BACKEND = 3


class NoOverlapError(ValueError):
    """Annotations and classifications share no (comment_id, task) pairs."""


@dataclass
class RunConfig:
    corpus_path: str = "corpus.jsonl"
    sample_n: int = 1000
    seed: int = 0
    tasks: list[TaskKind] = field(default_factory=lambda: list(TaskKind))
    backend: str = "mock"
    out_dir: str = "out"
    base_url: str = "https://api.openai.com"
    model_name: str = "gpt-4o"
    auth_env_var: str = "PULSE_API_KEY"
    temperature: float = 0.0
    max_retries: int = 3
    backoff_base_ms: int = 250
    backoff_cap_ms: int = 30_000
    parallelism: int = 4
    cache_path: str | None = None  # default: <out_dir>/cache.jsonl

    def __post_init__(self) -> None:
        if self.sample_n < 1:
            raise ValueError("sample_n must be >= 1")
        if not self.tasks:
            raise ValueError("tasks must be non-empty")
        if self.backend not in ("remote", "mock"):
            raise ValueError("backend must be 'remote' or 'mock'")

    def backend_config(self) -> BackendConfig:
        cache = self.cache_path or str(Path(self.out_dir) / "cache.jsonl")
        return BackendConfig(
            base_url=self.base_url,
            model_name=self.model_name,
            auth_env_var=self.auth_env_var,
            temperature=self.temperature,
            max_retries=self.max_retries,
            backoff_base_ms=self.backoff_base_ms,
            backoff_cap_ms=self.backoff_cap_ms,
            parallelism=self.parallelism,
            cache_path=cache,
        )

    def classifications_path(self) -> Path:
        return Path(self.out_dir) / "classifications.jsonl"

    def annotations_path(self) -> Path:
        return Path(self.out_dir) / "annotations.csv"


def _parse_tasks(text: str) -> list[TaskKind]:
    tasks = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        tasks.append(TaskKind(part))
    return tasks


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge config-file values and CLI overrides onto the defaults."""
    values: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(
                f"unknown config field(s): {', '.join(sorted(unknown))}"
            )
        values.update(raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if isinstance(values.get("tasks"), str):
        values["tasks"] = _parse_tasks(values["tasks"])
    elif isinstance(values.get("tasks"), list):
        values["tasks"] = [
            t if isinstance(t, TaskKind) else TaskKind(t)
            for t in values["tasks"]
        ]
    return RunConfig(**values)


def cmd_synth(path: str | Path, per_coin_n: int, seed: int) -> int:
    count = write_corpus(path, per_coin_n, seed)
    print(f"wrote {count} comments to {path}")
    return EXIT_OK


def cmd_classify(config: RunConfig, *, transport=None, clock=None) -> int:
    """Load, dedupe, sample, classify every configured task, persist."""
    comments = dedupe(load_corpus(config.corpus_path))
    sample = sample_per_coin(comments, config.sample_n, config.seed)
    classifier = Classifier(
        config.backend_config(),
        config.backend,
        transport=transport,
        clock=clock,
    )
    out_path = config.classifications_path()
    for task in config.tasks:
        results, stats = classifier.classify_batch(task, sample)
        written = append_classifications(out_path, results)
        print(f"{task.value}: {stats.summary()} appended={written}")
        for comment_id, reason in stats.failures[:10]:
            print(f"  failed {comment_id}: {reason}", file=sys.stderr)
    return EXIT_OK


def cmd_annotate(
    config: RunConfig,
    task: TaskKind,
    annotator_id: str,
    k: int,
    *,
    input_fn=input,
) -> int:
    """Blind interactive labeling of a seeded sample of classified comments.

    Model labels are never shown. Every answer is appended immediately,
    so an interrupted session resumes where it stopped.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    annotations_path = config.annotations_path()
    if k == 0:
        append_annotations(annotations_path, [])
        print(f"annotations file ready at {annotations_path}")
        return EXIT_OK

    classified = load_classifications(config.classifications_path())
    candidate_ids = sorted(
        {record.comment_id for record in classified if record.task is task}
    )
    if len(candidate_ids) < k:
        raise ValueError(
            f"only {len(candidate_ids)} {task.value} classifications"
            f" available, {k} requested"
        )
    texts = {
        comment.id: comment.raw_text
        for comment in load_corpus(config.corpus_path)
    }
    missing = [cid for cid in candidate_ids if cid not in texts]
    if missing:
        raise SchemaError(
            f"classified comment(s) missing from corpus: {missing[:5]}"
        )

    rng = random.Random(f"{config.seed}|annotate|{task.value}")
    chosen = rng.sample(candidate_ids, k)
    done: set[str] = set()
    if annotations_path.exists():
        for record in load_annotations(annotations_path):
            if record.task is task and record.annotator_id == annotator_id:
                done.add(record.comment_id)
    pending = [cid for cid in chosen if cid not in done]
    if not pending:
        print("nothing left to annotate")
        return EXIT_OK

    vocabulary = labels_for(task)
    menu = "\n".join(
        f"  {i}. {label.value}" for i, label in enumerate(vocabulary, 1)
    )
    print(f"annotating {len(pending)} of {k} comments, task={task.value}")
    try:
        for position, comment_id in enumerate(pending, 1):
            print(f"\n[{position}/{len(pending)}] {texts[comment_id]}")
            print(menu)
            while True:
                answer = input_fn("label number> ").strip()
                if answer.isdigit() and 1 <= int(answer) <= len(vocabulary):
                    break
                print(f"enter a number between 1 and {len(vocabulary)}")
            label = vocabulary[int(answer) - 1]
            append_annotations(
                annotations_path,
                [AnnotationRecord(comment_id, task, label, annotator_id)],
            )
    except (KeyboardInterrupt, EOFError):
        print(f"\ninterrupted; progress saved to {annotations_path}")
        return EXIT_OK
    print(f"done; annotations in {annotations_path}")
    return EXIT_OK


def cmd_agree(
    config: RunConfig, task: TaskKind, annotations_path: str | Path
) -> int:
    """Join annotations to classifications and print Cohen's kappa."""
    model_labels = {
        record.comment_id: record.label
        for record in load_classifications(config.classifications_path())
        if record.task is task
    }
    pairs = [
        (model_labels[record.comment_id], record.label)
        for record in load_annotations(annotations_path)
        if record.task is task and record.comment_id in model_labels
    ]
    if not pairs:
        raise NoOverlapError(
            f"no overlapping (comment_id, task={task.value}) pairs"
        )
    result = cohen_kappa(pairs)
    print(
        f"task={result.task.value} n_items={result.n_items}"
        f" p_o={result.p_o:.4f} p_e={result.p_e:.4f}"
        f" kappa={result.kappa:.4f}"
    )
    return EXIT_OK


def _kappas_if_annotated(config: RunConfig) -> list[KappaResult]:
    annotations_path = config.annotations_path()
    if not annotations_path.exists():
        return []
    annotations = load_annotations(annotations_path)
    classifications = load_classifications(config.classifications_path())
    kappas = []
    for task in TaskKind:
        model_labels = {
            r.comment_id: r.label for r in classifications if r.task is task
        }
        pairs = [
            (model_labels[a.comment_id], a.label)
            for a in annotations
            if a.task is task and a.comment_id in model_labels
        ]
        if pairs:
            kappas.append(cohen_kappa(pairs))
    return kappas


def cmd_report(config: RunConfig) -> int:
    """Tally per-coin distributions for every task and write the report."""
    classifications = load_classifications(config.classifications_path())
    coins = {c.id: c.coin for c in load_corpus(config.corpus_path)}
    rows = []
    for task in TaskKind:
        task_records = [r for r in classifications if r.task is task]
        if not task_records:
            continue
        for coin, counts in tally(task_records, task, coins).items():
            rows.append(
                to_percentages(counts, sum(counts.values()), coin=coin)
            )
    paths = render_report(rows, _kappas_if_annotated(config), config.out_dir)
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="cryptopulse", description=__doc__)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="run seed")
    parser.add_argument("--out", dest="out_dir", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("--path", help="corpus file to write")
    p_synth.add_argument(
        "--per-coin", type=int, default=1000, help="comments per coin"
    )

    p_classify = sub.add_parser("classify", help="classify a corpus sample")
    p_classify.add_argument("--backend", choices=["remote", "mock"])
    p_classify.add_argument(
        "--tasks", help="comma list: prediction,hope,regret"
    )
    p_classify.add_argument("--sample-n", dest="sample_n", type=int)
    p_classify.add_argument("--corpus-path", dest="corpus_path")
    p_classify.add_argument("--base-url", dest="base_url")
    p_classify.add_argument("--model-name", dest="model_name")
    p_classify.add_argument("--auth-env-var", dest="auth_env_var")
    p_classify.add_argument("--temperature", type=float)
    p_classify.add_argument("--max-retries", dest="max_retries", type=int)
    p_classify.add_argument(
        "--backoff-base-ms", dest="backoff_base_ms", type=int
    )
    p_classify.add_argument("--parallelism", type=int)
    p_classify.add_argument("--cache-path", dest="cache_path")

    p_annotate = sub.add_parser("annotate", help="blind human labeling")
    p_annotate.add_argument("--task", required=True)
    p_annotate.add_argument("--annotator", required=True)
    p_annotate.add_argument("--k", type=int, required=True)
    p_annotate.add_argument("--corpus-path", dest="corpus_path")

    p_agree = sub.add_parser("agree", help="model-vs-human Cohen's kappa")
    p_agree.add_argument("--task", required=True)
    p_agree.add_argument("--annotations", help="annotations CSV path")

    p_report = sub.add_parser("report", help="distribution report + CSVs")
    p_report.add_argument("--corpus-path", dest="corpus_path")

    return parser


_CONFIG_KEYS = (
    "corpus_path", "sample_n", "seed", "tasks", "backend", "out_dir",
    "base_url", "model_name", "auth_env_var", "temperature", "max_retries",
    "backoff_base_ms", "backoff_cap_ms", "parallelism", "cache_path",
)


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    overrides = {
        key: getattr(args, key) for key in _CONFIG_KEYS if hasattr(args, key)
    }
    try:
        config = load_config(args.config, overrides)
        if args.command == "synth":
            path = args.path or config.corpus_path
            return cmd_synth(path, args.per_coin, config.seed)
        if args.command == "classify":
            return cmd_classify(config)
        if args.command == "annotate":
            return cmd_annotate(
                config, TaskKind(args.task), args.annotator, args.k
            )
        if args.command == "agree":
            annotations = args.annotations or config.annotations_path()
            return cmd_agree(config, TaskKind(args.task), annotations)
        if args.command == "report":
            return cmd_report(config)
        raise AssertionError(f"unhandled command {args.command}")
    except (AuthError, TransportError, UnparsableResponseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (
        OSError,
        SchemaError,
        DuplicateIdError,
        InsufficientCommentsError,
        NoOverlapError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
