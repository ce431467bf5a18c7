from collections import Counter

import pytest

from ctxspell.ngram_model import (
    MAGIC,
    ModelBuildError,
    ModelChecksumError,
    ModelFormatError,
    ModelTruncatedError,
    ModelVersionError,
    build_model,
    deserialize_model,
    export_text_dump,
    load_model,
    save_model,
    serialize_model,
)
from tests_support import naive_ngram_counts


def test_toy_counts(toy_model):
    assert toy_model.count("the") == 2
    assert toy_model.count("cat") == 2
    assert toy_model.count("sat") == 1
    assert toy_model.count("ran") == 1
    assert toy_model.count("the", "cat") == 2
    assert toy_model.count("the", "cat", "sat") == 1
    assert toy_model.total_unigrams == 6


def test_ids_by_frequency_then_word(toy_model):
    assert list(toy_model.words) == ["cat", "the", "ran", "sat"]


def test_frequency_threshold():
    model = build_model([["the", "cat", "sat"], ["the", "cat", "ran"]], min_word_len=1, min_word_freq=1)
    assert sorted(model.words) == ["cat", "the"]
    assert model.trie.n_bigrams() == 1
    assert model.count("the", "cat") == 2
    assert model.trie.n_trigrams() == 0


def test_length_threshold():
    model = build_model([["a", "bb", "a", "bb"]], min_word_len=2, min_word_freq=0)
    assert list(model.words) == ["bb"]
    assert model.trie.n_bigrams() == 0


def test_empty_stream_is_a_build_error():
    with pytest.raises(ModelBuildError):
        build_model([])
    with pytest.raises(ModelBuildError):
        build_model([[], []])


def test_cond_prob(toy_model):
    assert toy_model.cond_prob(["the"], "cat") == 1.0
    assert toy_model.cond_prob(["the", "cat"], "sat") == 0.5
    assert toy_model.cond_prob(["zzz"], "cat") == 0.0
    assert toy_model.cond_prob([], "cat") == pytest.approx(2 / 6)
    assert toy_model.cond_prob(["sat"], "the") == 0.0


def test_contains_with_case_fallback(toy_model):
    assert toy_model.contains("cat")
    assert toy_model.contains("Cat")
    assert not toy_model.contains("cAT")
    assert not toy_model.contains("zzz")
    assert toy_model.cond_prob(["The"], "cat") == 1.0


def test_counts_match_sliding_window(corpus_factory):
    """Every stored count equals an independent window count, and cond_prob is the exact ratio."""
    sentences = corpus_factory(seed=7, n_sentences=1000, vocabulary_size=150)
    model = build_model(sentences, min_word_len=1, min_word_freq=0)
    unigrams, bigrams, trigrams = naive_ngram_counts(sentences)

    assert set(model.words) == set(unigrams)
    for word, n in unigrams.items():
        assert model.count(word) == n
    assert model.trie.n_bigrams() == len(bigrams)
    for gram, n in bigrams.items():
        assert model.count(*gram) == n
        assert model.cond_prob([gram[0]], gram[1]) == n / unigrams[gram[0]]
        assert model.count(*gram) * unigrams[gram[0]] == n * model.count(gram[0])
    assert model.trie.n_trigrams() == len(trigrams)
    for gram, n in trigrams.items():
        assert model.count(*gram) == n
        assert model.cond_prob(list(gram[:2]), gram[2]) == n / bigrams[gram[:2]]
        assert model.count(*gram) * bigrams[gram[:2]] == n * model.count(*gram[:2])


def test_thresholded_windows_only_hold_known_words(corpus_factory):
    sentences = corpus_factory(seed=3, n_sentences=800, vocabulary_size=200)
    model = build_model(sentences, min_word_len=1, min_word_freq=3)
    known = set(model.words)
    unigrams, bigrams, trigrams = naive_ngram_counts(sentences)
    for word in known:
        assert unigrams[word] > 3
    for gram, n in bigrams.items():
        expected = n if set(gram) <= known else 0
        assert model.count(*gram) == expected
    for gram, n in trigrams.items():
        expected = n if set(gram) <= known else 0
        assert model.count(*gram) == expected


def test_monotone_containment_and_normalization(corpus_factory):
    sentences = corpus_factory(seed=11, n_sentences=500)
    model = build_model(sentences, min_word_len=1, min_word_freq=2)
    trie = model.trie
    for a, b_children in trie.trigrams.items():
        for b, c_children in b_children.items():
            assert trie.bigram_count(a, b) > 0
            for c, n in c_children.items():
                assert n <= trie.bigram_count(a, b) <= model.unigram_counts[a]
    for word in model.words:
        assert sum(model.cond_prob([word], w) for w in model.successors(word)) <= 1.0 + 1e-12


def test_save_load_round_trip(tmp_path, toy_model):
    path = tmp_path / "toy.cspk"
    size = save_model(toy_model, path)
    assert size == path.stat().st_size
    loaded = load_model(path)
    assert list(loaded.words) == list(toy_model.words)
    assert loaded.unigram_counts == toy_model.unigram_counts
    assert loaded.trie.bigrams == toy_model.trie.bigrams
    assert loaded.trie.trigrams == toy_model.trie.trigrams
    assert loaded.total_unigrams == toy_model.total_unigrams
    assert loaded.language_code == "en"
    for context, word in [([], "cat"), (["the"], "cat"), (["the", "cat"], "sat"), (["cat"], "ran")]:
        assert loaded.cond_prob(context, word) == toy_model.cond_prob(context, word)


def test_save_is_deterministic(corpus_factory):
    sentences = corpus_factory(seed=5, n_sentences=300)
    first = serialize_model(build_model(sentences, min_word_len=1, min_word_freq=0))
    second = serialize_model(build_model(sentences, min_word_len=1, min_word_freq=0))
    assert first == second


def test_bad_magic(toy_model):
    data = bytearray(serialize_model(toy_model))
    data[:4] = b"NOPE"
    with pytest.raises(ModelFormatError):
        deserialize_model(bytes(data))


def test_version_mismatch(toy_model):
    data = bytearray(serialize_model(toy_model))
    data[4] = 99
    with pytest.raises(ModelVersionError):
        deserialize_model(bytes(data))


def test_checksum_failure(toy_model):
    data = bytearray(serialize_model(toy_model))
    data[20] ^= 0xFF
    with pytest.raises(ModelChecksumError):
        deserialize_model(bytes(data))


def test_truncation(toy_model):
    data = serialize_model(toy_model)
    with pytest.raises(ModelTruncatedError):
        deserialize_model(data[:-3])
    with pytest.raises(ModelTruncatedError):
        deserialize_model(MAGIC + b"\x01")


def test_stats(toy_model):
    stats = toy_model.stats()
    assert stats["words"] == 4
    assert stats["bigrams"] == 3
    assert stats["trigrams"] == 2
    assert stats["total_unigrams"] == 6


def test_binary_file_is_smaller_than_text_dump(tmp_path, corpus_factory):
    sentences = corpus_factory(seed=21, n_sentences=3000, vocabulary_size=400)
    model = build_model(sentences, min_word_len=1, min_word_freq=0)
    binary = save_model(model, tmp_path / "m.cspk")
    text = export_text_dump(model, tmp_path / "m.txt")
    assert binary <= 0.6 * text


def test_text_dump_lines(tmp_path, toy_model):
    path = tmp_path / "toy.txt"
    export_text_dump(toy_model, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert "the cat 2" in lines
    assert "the cat sat 1" in lines
    assert Counter(len(line.split()) for line in lines) == Counter({2: 4, 3: 3, 4: 2})
