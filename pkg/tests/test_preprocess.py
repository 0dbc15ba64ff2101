import random

import pytest

from cryptopulse.preprocess import (
    CleanText,
    EmptyAfterCleaningError,
    clean_special,
    drop_short,
    preprocess,
    strip_urls,
    tokenize,
)


def test_strip_urls_replaces_url_with_one_space():
    assert strip_urls("see https://t.co/xyz now") == "see   now"
    assert strip_urls("") == ""
    assert strip_urls("no links here") == "no links here"


def test_strip_urls_handles_all_three_prefixes():
    assert "t.co" not in strip_urls("http://t.co/a tail")
    assert "example" not in strip_urls("www.example.com/x tail")
    assert strip_urls("a https://x b www.y c") == "a   b   c"


def test_clean_special_examples():
    assert clean_special("BTC!!! to the #moon") == "BTC    to the  moon"
    assert clean_special("abc123") == "abc123"
    assert clean_special("@user $ADA") == " user  ADA"


def test_clean_special_replaces_emoji_and_symbols():
    assert clean_special("gm \U0001F680 fam") == "gm   fam"
    assert clean_special("a—b") == "a b"  # em dash is a symbol
    assert clean_special("café") == "café"  # accented letter kept


def test_tokenize():
    assert tokenize("the  quick  fox") == ["the", "quick", "fox"]
    assert tokenize("   ") == []
    assert tokenize("a b  c") == ["a", "b", "c"]


def test_drop_short():
    assert drop_short(["BTC", "up", "to", "the", "moon"]) == [
        "BTC", "the", "moon",
    ]
    assert drop_short([]) == []
    assert drop_short(["abc"]) == ["abc"]


def test_preprocess_pipeline_examples():
    assert preprocess("Check https://t.co/abc BTC up!!").tokens == (
        "Check", "BTC",
    )
    with pytest.raises(EmptyAfterCleaningError):
        preprocess("ok")
    result = preprocess(
        "Blockchain technology is revolutionizing various industries"
        " worldwide."
    )
    assert result.tokens == (
        "Blockchain", "technology", "revolutionizing", "various",
        "industries", "worldwide",
    )


def test_preprocess_joins_tokens_with_single_spaces():
    result = preprocess("one,, two...   three!")
    assert result.text == "one two three"
    assert result == CleanText(text="one two three", tokens=("one", "two", "three"))


def test_preprocess_preserves_case():
    assert preprocess("BTC btc BtC").tokens == ("BTC", "btc", "BtC")


_ALPHABET = (
    list("abcdefgXYZ0123456789")
    + list(" \t\n.,!?#@$%^&*~`|\\<>'\"()[]{}_-+=:;/")
    + ["\U0001F680", "é", "—", "http://", "https://t.co/", "www.", "BTC ", "up "]
)


def _fuzz_corpus(n=1000, seed=20240601):
    rng = random.Random(seed)
    texts = []
    for _ in range(n):
        parts = rng.choices(_ALPHABET, k=rng.randrange(1, 40))
        texts.append("".join(parts))
    return texts


def test_fuzz_determinism_and_output_purity():
    for raw in _fuzz_corpus():
        try:
            first = preprocess(raw)
        except EmptyAfterCleaningError:
            continue
        assert preprocess(raw) == first
        assert all(len(token) >= 3 for token in first.tokens)
        assert first.text == " ".join(first.tokens)
        for token in first.tokens:
            assert all(ch.isalnum() for ch in token)
        for marker in ("http://", "https://", "www."):
            assert marker not in first.text


def test_fuzz_idempotence():
    for raw in _fuzz_corpus():
        try:
            once = preprocess(raw)
        except EmptyAfterCleaningError:
            continue
        assert preprocess(once.text).text == once.text


def test_fuzz_strip_urls_never_adds_nonspace_characters():
    def nonspace(s):
        return sum(1 for ch in s if not ch.isspace())

    for raw in _fuzz_corpus():
        assert nonspace(strip_urls(raw)) <= nonspace(raw)
