import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ctxspell.language_profile import load_profile
from ctxspell.ngram_model import build_model
from ctxspell.suggester import build_delete_index

PROFILES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "profiles")

TOY_SENTENCES = [["the", "cat", "sat"], ["the", "cat", "ran"]]


@pytest.fixture(scope="session")
def en_profile():
    return load_profile(os.path.join(PROFILES_DIR, "en.profile"))


@pytest.fixture
def toy_model():
    """the cat sat / the cat ran with every word kept."""
    return build_model(TOY_SENTENCES, min_word_len=1, min_word_freq=0, language_code="en")


@pytest.fixture
def toy_index(toy_model):
    return build_delete_index(toy_model, 2)


def random_corpus(seed, n_sentences, vocabulary_size=300, min_len=3, max_len=12, alphabet="abcdefghijklmnopqrstuvwxyz"):
    """Sentences drawn from a Zipf-like vocabulary of random lowercase words."""
    rng = np.random.default_rng(seed)
    vocabulary = set()
    while len(vocabulary) < vocabulary_size:
        length = int(rng.integers(3, 9))
        vocabulary.add("".join(rng.choice(list(alphabet), size=length)))
    vocabulary = sorted(vocabulary)
    weights = 1.0 / np.arange(1, vocabulary_size + 1)
    weights /= weights.sum()
    sentences = []
    for _ in range(n_sentences):
        length = int(rng.integers(min_len, max_len + 1))
        sentences.append([vocabulary[i] for i in rng.choice(vocabulary_size, size=length, p=weights)])
    return sentences


@pytest.fixture
def corpus_factory():
    return random_corpus


@pytest.fixture(scope="session")
def profiles_dir():
    return PROFILES_DIR
