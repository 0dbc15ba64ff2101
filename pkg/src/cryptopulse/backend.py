"""Classifier backends: a remote chat-completions client and an offline mock.

The remote path speaks the OpenAI-compatible wire protocol
(POST {base_url}/v1/chat/completions) with bounded retries, exponential
backoff with jitter, and a persistent JSONL response cache so interrupted
runs resume without repeated spend. The mock is a frozen keyword rule
table: a deterministic test double that lets the whole pipeline run with
zero network access. It is not a claim about how the real model behaves.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Callable

import requests

from .preprocess import EmptyAfterCleaningError, preprocess
from .prompting import build_prompt, interpret_response
from .taxonomy import (
    AmbiguousLabelError,
    Label,
    TaskKind,
    UnknownLabelError,
)

if TYPE_CHECKING:
    from .corpus import Comment

_HTTP_TIMEOUT_S = 60.0


class TransportError(RuntimeError):
    """Request could not be completed (after retries, if any remained)."""


class AuthError(RuntimeError):
    """Credential missing from the environment or rejected by the server."""


class UnparsableResponseError(RuntimeError):
    """Model answered, but not with a vocabulary label, twice in a row."""


@dataclass
class BackendConfig:
    base_url: str = "https://api.openai.com"
    model_name: str = "gpt-4o"
    auth_env_var: str = "PULSE_API_KEY"
    temperature: float = 0.0
    max_retries: int = 3
    backoff_base_ms: int = 250
    backoff_cap_ms: int = 30_000
    parallelism: int = 4
    cache_path: str | Path = "cache.jsonl"

    def __post_init__(self) -> None:
        if not 0 <= self.temperature <= 2:
            raise ValueError("temperature must be in [0, 2]")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.backoff_base_ms <= 0:
            raise ValueError("backoff_base_ms must be > 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


@dataclass(frozen=True)
class Classification:
    comment_id: str
    task: TaskKind
    label: Label
    backend_id: str  # "remote" | "mock"
    model_name: str
    cached: bool
    raw_response: str
    timestamp: str  # ISO-8601


@dataclass
class RunStats:
    total: int = 0
    classified: int = 0
    cache_hits: int = 0
    errors: int = 0
    empty_after_cleaning: int = 0
    requests: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    def summary(self) -> str:
        return (
            f"total={self.total} classified={self.classified}"
            f" cache_hits={self.cache_hits} errors={self.errors}"
            f" empty_after_cleaning={self.empty_after_cleaning}"
            f" requests={self.requests}"
        )


def cache_key(task: TaskKind, model_name: str, clean_text: str) -> str:
    """Stable content hash over (task, model, cleaned text)."""
    payload = "\x1f".join((task.value, model_name, clean_text))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# Mock rule table, frozen. Cues are matched as case-insensitive substrings
# of the cleaned text; rule order matters and is part of the contract.
_FUTURE_CUES = (
    "will", "expected", "expect", "anticipate", "forecast", "projected",
    "going", "future",
)
_UP_CUES = ("increase", "double", "grow", "rise", "high", "moon", "pump")
_DOWN_CUES = ("decrease", "decline", "drop", "fall", "crash", "dump")

_HOPE_UNREALISTIC_CUES = ("millionaire", "overnight", "guaranteed", "100x")
_HOPE_REALISTIC_CUES = ("likely", "probably", "trend")
_HOPE_GENERALIZED_CUES = (
    "hope", "hopeful", "excited", "optimistic", "optimism",
)

_REGRET_ACTION_CUES = ("bought", "buy", "sold", "sell", "invest")
_REGRET_INACTION_CUES = ("should", "missed")


def mock_classify(task: TaskKind, clean_text: str) -> Label:
    """Deterministic keyword classification of cleaned text."""
    text = clean_text.casefold()

    def has(cues: tuple[str, ...]) -> bool:
        return any(cue in text for cue in cues)

    if task is TaskKind.PREDICTION:
        if not has(_FUTURE_CUES):
            return Label.NON_PREDICTIVE
        up, down = has(_UP_CUES), has(_DOWN_CUES)
        if up and not down:
            return Label.PREDICTIVE_INCREMENTAL
        if down and not up:
            return Label.PREDICTIVE_DECREMENTAL
        return Label.PREDICTIVE_NEUTRAL
    if task is TaskKind.HOPE:
        if has(_HOPE_UNREALISTIC_CUES):
            return Label.UNREALISTIC_HOPE
        if has(_HOPE_REALISTIC_CUES):
            return Label.REALISTIC_HOPE
        if has(_HOPE_GENERALIZED_CUES):
            return Label.GENERALIZED_HOPE
        return Label.NOT_HOPE
    if "regret" in text and has(_REGRET_ACTION_CUES):
        return Label.REGRET_BY_ACTION
    if has(_REGRET_INACTION_CUES):
        return Label.REGRET_BY_INACTION
    return Label.NO_REGRET


class ResponseCache:
    """Disk-backed key -> record store, JSON lines, append-only.

    Safe for concurrent use from batch workers; identical keys imply
    identical values, so last-writer-wins is harmless.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: dict[str, dict] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = json.loads(line)
                    self._records[record["key"]] = record

    def get(self, key: str) -> dict | None:
        with self._lock:
            return self._records.get(key)

    def put(self, key: str, record: dict) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            self._records[key] = record


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _default_transport(url: str, headers: dict, payload: dict) -> dict:
    try:
        resp = requests.post(
            url, headers=headers, json=payload, timeout=_HTTP_TIMEOUT_S
        )
    except requests.RequestException as exc:
        raise TransportError(str(exc)) from exc
    if resp.status_code in (401, 403):
        raise AuthError(f"credential rejected (HTTP {resp.status_code})")
    if resp.status_code != 200:
        raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
    return resp.json()


class Classifier:
    """Maps (task, comment) to a Classification via one backend.

    `transport`, `clock`, `sleep`, and `rng` are injectable for tests: a
    fake transport makes the remote path fully offline, and a fixed clock
    makes batch output byte-reproducible.
    """

    def __init__(
        self,
        config: BackendConfig,
        backend: str = "mock",
        *,
        env: dict | None = None,
        transport: Callable[[str, dict, dict], dict] | None = None,
        clock: Callable[[], str] | None = None,
        sleep: Callable[[float], None] | None = None,
        rng: random.Random | None = None,
    ):
        if backend not in ("remote", "mock"):
            raise ValueError(f"unknown backend: {backend!r}")
        self.config = config
        self.backend_id = backend
        self._env = env
        self._transport = transport or _default_transport
        self._clock = clock or _utc_now_iso
        self._sleep = sleep or time.sleep
        self._rng = rng or random.Random()
        self._cache = (
            ResponseCache(config.cache_path) if backend == "remote" else None
        )
        self._lock = threading.Lock()
        self.requests_made = 0

    def _credential(self) -> str:
        env = self._env if self._env is not None else os.environ
        token = env.get(self.config.auth_env_var)
        if not token:
            raise AuthError(
                f"environment variable {self.config.auth_env_var} is not set"
            )
        return token

    def _ask(self, messages: list[dict[str, str]]) -> str:
        """One model request with transport-level retries."""
        url = self.config.base_url.rstrip("/") + "/v1/chat/completions"
        headers = {"Authorization": f"Bearer {self._credential()}"}
        payload = {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": self.config.temperature,
        }
        last_error: TransportError | None = None
        for attempt in range(1 + self.config.max_retries):
            if attempt > 0:
                cap_ms = min(
                    self.config.backoff_cap_ms,
                    self.config.backoff_base_ms * 2 ** (attempt - 1),
                )
                self._sleep(self._rng.uniform(0, cap_ms) / 1000.0)
            with self._lock:
                self.requests_made += 1
            try:
                body = self._transport(url, headers, payload)
            except TransportError as exc:
                last_error = exc
                continue
            return body["choices"][0]["message"]["content"]
        raise TransportError(
            f"gave up after {1 + self.config.max_retries} attempts:"
            f" {last_error}"
        )

    def _classify_clean(
        self, task: TaskKind, comment_id: str, clean_text: str
    ) -> Classification:
        if self.backend_id == "mock":
            label = mock_classify(task, clean_text)
            return Classification(
                comment_id=comment_id,
                task=task,
                label=label,
                backend_id="mock",
                model_name=self.config.model_name,
                cached=False,
                raw_response=label.value,
                timestamp=self._clock(),
            )

        key = cache_key(task, self.config.model_name, clean_text)
        assert self._cache is not None
        hit = self._cache.get(key)
        if hit is not None:
            return Classification(
                comment_id=comment_id,
                task=task,
                label=interpret_response(task, hit["label"]),
                backend_id="remote",
                model_name=hit["model"],
                cached=True,
                raw_response=hit["raw_response"],
                timestamp=hit["timestamp"],
            )

        messages = build_prompt(task, clean_text).as_chat()
        raw = self._ask(messages)
        try:
            label = interpret_response(task, raw)
        except (UnknownLabelError, AmbiguousLabelError):
            # One re-ask with the same prompt, then give up; silent
            # relabeling is forbidden.
            raw = self._ask(messages)
            try:
                label = interpret_response(task, raw)
            except (UnknownLabelError, AmbiguousLabelError) as exc:
                raise UnparsableResponseError(
                    f"unparsable response for comment {comment_id}: {raw!r}"
                ) from exc
        timestamp = self._clock()
        self._cache.put(
            key,
            {
                "key": key,
                "label": label.value,
                "raw_response": raw,
                "model": self.config.model_name,
                "timestamp": timestamp,
            },
        )
        return Classification(
            comment_id=comment_id,
            task=task,
            label=label,
            backend_id="remote",
            model_name=self.config.model_name,
            cached=False,
            raw_response=raw,
            timestamp=timestamp,
        )

    def classify(self, task: TaskKind, comment: "Comment") -> Classification:
        """Classify one comment; the cache is consulted first (remote only)."""
        clean = preprocess(comment.raw_text)
        return self._classify_clean(task, comment.id, clean.text)

    def classify_batch(
        self, task: TaskKind, comments: list["Comment"]
    ) -> tuple[list[Classification], RunStats]:
        """Classify comments with bounded parallelism.

        Output order matches input order. Per-item failures are recorded
        in RunStats and never abort the batch.
        """
        stats = RunStats(total=len(comments))
        requests_before = self.requests_made

        def work(comment: "Comment"):
            try:
                clean = preprocess(comment.raw_text)
            except EmptyAfterCleaningError as exc:
                return ("empty", comment.id, str(exc))
            try:
                return ("ok", self._classify_clean(task, comment.id, clean.text))
            except (TransportError, AuthError, UnparsableResponseError) as exc:
                return ("error", comment.id, str(exc))

        with ThreadPoolExecutor(
            max_workers=self.config.parallelism
        ) as pool:
            outcomes = list(pool.map(work, comments))

        results: list[Classification] = []
        for outcome in outcomes:
            if outcome[0] == "ok":
                classification = outcome[1]
                results.append(classification)
                stats.classified += 1
                if classification.cached:
                    stats.cache_hits += 1
            elif outcome[0] == "empty":
                stats.empty_after_cleaning += 1
                stats.failures.append((outcome[1], outcome[2]))
            else:
                stats.errors += 1
                stats.failures.append((outcome[1], outcome[2]))
        stats.requests = self.requests_made - requests_before
        return results, stats
