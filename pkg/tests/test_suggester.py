import numpy as np
import pytest

from ctxspell.ngram_model import build_model
from ctxspell.suggester import (
    Candidate,
    DeleteIndex,
    build_delete_index,
    candidates,
    deletes,
    levenshtein,
    verify,
)
from tests_support import dp_levenshtein

ALPHABET = list("abcdefghij")


def _random_words(rng, n, min_len=3, max_len=16):
    words = set()
    while len(words) < n:
        length = int(rng.integers(min_len, max_len + 1))
        words.add("".join(rng.choice(ALPHABET, size=length)))
    return sorted(words)


def _dictionary_model(words):
    return build_model([[w] for w in words], min_word_len=1, min_word_freq=0)


def _oracle(token, words, d):
    return sorted((dp_levenshtein(token, w), w) for w in words if dp_levenshtein(token, w) <= d)


def test_levenshtein_matches_dp():
    pairs = [("kitten", "sitting"), ("", "abc"), ("flaw", "lawn"), ("grow", "gorw"), ("same", "same")]
    for a, b in pairs:
        assert levenshtein(a, b) == dp_levenshtein(a, b)


def test_levenshtein_cutoff():
    assert levenshtein("kitten", "sitting", 2) == 3
    assert levenshtein("kitten", "sitten", 2) == 1


def test_deletes_include_word_and_variants():
    assert deletes("cat", 1) == {"cat", "at", "ct", "ca"}
    assert "t" in deletes("cat", 2)
    assert "" not in deletes("cat", 2)


def test_index_rejects_bad_distance():
    with pytest.raises(ValueError):
        DeleteIndex(3)
    with pytest.raises(ValueError):
        DeleteIndex(0)


def test_toy_candidates(toy_model, toy_index):
    found = candidates(toy_index, toy_model, "cqt")
    assert found[0] == Candidate("cat", 1)
    assert Candidate("sat", 2) in found
    assert all(c.edit_distance <= 2 for c in found)


def test_known_word_comes_back_at_distance_zero(toy_model, toy_index):
    assert candidates(toy_index, toy_model, "cat")[0] == Candidate("cat", 0)


def test_no_candidates_for_distant_token(toy_model, toy_index):
    assert candidates(toy_index, toy_model, "zzzzzzzz") == []


@pytest.mark.parametrize("seed", [1, 2, 3])
@pytest.mark.parametrize("max_distance", [1, 2])
def test_delete_index_equals_full_scan(seed, max_distance):
    """Symmetric delete lookup returns exactly the words a full DP scan finds."""
    rng = np.random.default_rng(seed)
    words = _random_words(rng, 1500)
    model = _dictionary_model(words)
    index = build_delete_index(model, max_distance)
    queries = _random_words(rng, 120)
    # neighbours of real words make sure non-empty answers are exercised
    for word in words[:60]:
        pos = int(rng.integers(len(word)))
        queries.append(word[:pos] + "j" + word[pos + 1:])
    for token in queries:
        got = [(c.edit_distance, c.word) for c in candidates(index, model, token)]
        assert got == _oracle(token, words, max_distance)


def test_verify_sorts_by_distance_then_word():
    found = verify("cat", ["cut", "bat", "cast", "dog", "ca"], 1)
    assert [c.word for c in found] == ["bat", "ca", "cast", "cut"]


@pytest.mark.slow
@pytest.mark.parametrize("seed", [10, 20, 30])
def test_delete_index_equals_full_scan_large(seed):
    rng = np.random.default_rng(seed)
    words = _random_words(rng, 10_000)
    model = _dictionary_model(words)
    index = build_delete_index(model, 2)
    known = set(words)
    for token in _random_words(rng, 500):
        if token in known:
            continue
        got = {(c.edit_distance, c.word) for c in candidates(index, model, token)}
        assert got == {(c.edit_distance, c.word) for c in verify(token, words, 2)}
