"""Deterministic synthetic corpus generation.

Stands in for the unavailable study dataset: for each of the five study
coins it fills template sentences covering all eleven labels (prediction,
hope, and regret flavors plus neutral chatter, URLs, and emoji noise).
Output is byte-identical for identical (path-independent) arguments, and
every generated comment has a globally unique cleaned text so downstream
deduplication never starves the per-coin sampler.
"""
from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .preprocess import EmptyAfterCleaningError, preprocess

COINS = ("cardano", "binance", "matic", "fantom", "ripple")

_HORIZONS = (
    "the end of the year", "next quarter", "next month", "early next year",
    "the next halving", "this summer", "the coming weeks", "the next cycle",
    "the fourth quarter", "the next listing window", "mid next year",
    "the following season",
)
_UP_REASONS = (
    "new exchange listings", "the protocol upgrade", "institutional inflows",
    "regulatory clarity", "the partnership news", "rising adoption",
    "strong testnet results", "the staking launch", "developer momentum",
    "the burn schedule", "growing wallet counts", "the index inclusion",
)
_DOWN_REASONS = (
    "the hack headlines", "profit taking", "the delisting rumor",
    "macro fear", "the unlock schedule", "thin liquidity",
    "the lawsuit news", "miner selling", "the exploit report",
    "funding rate stress", "the audit delay", "stablecoin outflows",
)
_TOPICS = (
    "governance", "tokenomics", "staking rewards", "bridge security",
    "validator uptime", "wallet support", "treasury policy", "gas fees",
    "roadmap milestones", "community grants", "node software", "custody",
)
_QUALIFIERS = (
    "honestly", "frankly", "seriously", "apparently", "clearly",
    "genuinely", "truly", "certainly", "basically", "admittedly",
    "evidently", "arguably",
)
_LINKS = (
    "https://charts.example/view", "https://news.example/story",
    "http://forum.example/thread", "www.tracker.example/feed",
    "https://research.example/note", "www.data.example/sheet",
)

# Each template mentions the coin, so cleaned texts cannot collide across
# coins; slot pools keep the per-coin variant space comfortably larger than
# typical request sizes.
_TEMPLATES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("{Coin} is expected to double by {horizon} thanks to {up_reason}.",
     ("horizon", "up_reason")),
    ("There will be a steady increase in {coin} market share after {up_reason}.",
     ("up_reason", "qualifier")),
    ("Analysts forecast a decrease in {coin} volume following {down_reason}.",
     ("down_reason", "qualifier")),
    ("{Coin} is projected to decline into {horizon} because of {down_reason}.",
     ("horizon", "down_reason")),
    ("We expect {coin} to remain consistent through {horizon}, {qualifier}.",
     ("horizon", "qualifier")),
    ("There is uncertainty regarding future {coin} conditions around {topic}.",
     ("topic", "qualifier")),
    ("{Coin} settled my payment in seconds yesterday, {qualifier} smooth {topic}.",
     ("qualifier", "topic")),
    ("The {coin} team published the {topic} report for the current period.",
     ("topic", "qualifier")),
    ("I'm sure this tiny {coin} bag will make me a millionaire overnight once {up_reason} lands.",
     ("up_reason", "qualifier")),
    ("Buying {coin} here is guaranteed wealth, {qualifier}, just watch {topic}.",
     ("qualifier", "topic")),
    ("With the recent trends it's likely {coin} recovers by {horizon}.",
     ("horizon", "qualifier")),
    ("{Coin} will probably stabilize after {down_reason}, give it until {horizon}.",
     ("down_reason", "horizon")),
    ("Excited about the future of {coin}, the work on {topic} is remarkable.",
     ("topic", "qualifier")),
    ("Feeling hopeful about {coin} since {up_reason}, {qualifier}.",
     ("up_reason", "qualifier")),
    ("I doubt {coin} ever amounts to much given {down_reason}.",
     ("down_reason", "qualifier")),
    ("I regret buying {coin} near the top, {down_reason} wrecked the chart.",
     ("down_reason", "qualifier")),
    ("I regret that I sold my {coin} right before {up_reason}.",
     ("up_reason", "qualifier")),
    ("I should have bought {coin} when it was cheaper, before {up_reason}.",
     ("up_reason", "qualifier")),
    ("I missed the {coin} dip during {down_reason}, {qualifier}.",
     ("down_reason", "qualifier")),
    ("Glad I never touched {coin}, {qualifier}, look at {topic} now.",
     ("qualifier", "topic")),
    ("Check {link} for the {coin} numbers on {topic}.",
     ("link", "topic")),
    ("{Coin} community call recap \U0001F680 covering {topic} and {up_reason}.",
     ("topic", "up_reason")),
)

_POOLS = {
    "horizon": _HORIZONS,
    "up_reason": _UP_REASONS,
    "down_reason": _DOWN_REASONS,
    "topic": _TOPICS,
    "qualifier": _QUALIFIERS,
    "link": _LINKS,
}

_EPOCH = datetime(2021, 9, 1, tzinfo=timezone.utc)
_WINDOW_DAYS = 546  # study window, roughly Sep 2021 - Mar 2023


def _variants(coin: str) -> list[str]:
    texts: list[str] = []
    for template, slot_names in _TEMPLATES:
        fills: list[dict[str, str]] = [{}]
        for name in slot_names:
            fills = [
                {**fill, name: value}
                for fill in fills
                for value in _POOLS[name]
            ]
        for fill in fills:
            texts.append(
                template.format(
                    coin=coin, Coin=coin.capitalize(), **fill
                )
            )
    return texts


def generate_corpus(per_coin_n: int, seed: int) -> list[dict]:
    """Build per_coin_n synthetic comments per coin, deterministically."""
    if per_coin_n < 1:
        raise ValueError("per_coin_n must be >= 1")
    records: list[dict] = []
    seen_clean: set[str] = set()
    for coin in COINS:
        rng = random.Random(f"{seed}|{coin}")
        variants = _variants(coin)
        rng.shuffle(variants)
        picked: list[str] = []
        serial = 100
        source = iter(variants)
        while len(picked) < per_coin_n:
            try:
                text = next(source)
            except StopIteration:
                # Variant space exhausted; extend with serial-tagged reruns.
                serial += 1
                text = f"{variants[serial % len(variants)]} log {serial}"
            try:
                clean = preprocess(text).text
            except EmptyAfterCleaningError:
                continue
            if clean in seen_clean:
                continue
            seen_clean.add(clean)
            picked.append(text)
        for i, text in enumerate(picked):
            created = _EPOCH + timedelta(
                days=rng.randrange(_WINDOW_DAYS),
                hours=rng.randrange(24),
                minutes=rng.randrange(60),
            )
            records.append(
                {
                    "id": f"{coin}-{i:05d}",
                    "coin": coin,
                    "text": text,
                    "created_at": created.isoformat(),
                }
            )
    return records


def write_corpus(path: str | Path, per_coin_n: int, seed: int) -> int:
    """Write the synthetic corpus as JSON lines; returns the line count."""
    records = generate_corpus(per_coin_n, seed)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return len(records)
