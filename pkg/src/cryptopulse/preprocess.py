"""Comment text cleaning: URL removal, special-character stripping,
tokenization, and short-word filtering.

The stages always run in the same order (URLs first, so their fragments
cannot survive punctuation stripping) and the result is deterministic:
only letters, digits, and single spaces come out, and every surviving
token is at least three characters long. Case is preserved; "BTC" carries
signal that "btc" does not.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

# A URL is anything from "http://", "https://", or "www." to the next
# whitespace, wherever it starts.
_URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)

_MIN_TOKEN_LEN = 3


class EmptyAfterCleaningError(ValueError):
    """No token survived cleaning; the comment cannot be classified."""


@dataclass(frozen=True)
class CleanText:
    text: str
    tokens: tuple[str, ...]


def strip_urls(text: str) -> str:
    """Replace each URL with a single space; everything else unchanged."""
    return _URL_RE.sub(" ", text)


def clean_special(text: str) -> str:
    """Replace every non-alphanumeric, non-whitespace character with a space.

    Covers all ASCII punctuation and symbols plus emoji and other
    non-ASCII symbols; letters (including accented ones), digits, and
    whitespace pass through.
    """
    return "".join(
        ch if ch.isalnum() or ch.isspace() else " " for ch in text
    )


def tokenize(text: str) -> list[str]:
    """Split on whitespace runs; no empty tokens."""
    return text.split()


def drop_short(tokens: list[str]) -> list[str]:
    """Remove tokens of length <= 2, measured in Unicode scalar values."""
    return [t for t in tokens if len(t) >= _MIN_TOKEN_LEN]


def preprocess(raw_text: str) -> CleanText:
    """Run the full cleaning pipeline on one comment.

    Order: strip_urls, clean_special, NFC normalization, tokenize,
    drop_short. Raises EmptyAfterCleaningError if nothing survives.
    """
    text = strip_urls(raw_text)
    text = clean_special(text)
    text = unicodedata.normalize("NFC", text)
    tokens = drop_short(tokenize(text))
    if not tokens:
        raise EmptyAfterCleaningError(
            f"comment is empty after cleaning: {raw_text!r}"
        )
    return CleanText(text=" ".join(tokens), tokens=tuple(tokens))
