"""
Context ranking of correction candidates.

A candidate c for position i of a sentence x is scored as

    total = w1 * P(c)
          + w2 * (P(c | x[i-1]) + P(x[i+1] | c))
          + w3 * (P(c | x[i-2] x[i-1]) + P(x[i+1] | x[i-1] c) + P(x[i+2] | c x[i+1]))

Windows that run past either sentence boundary contribute 0, and so does any
window holding a word the model does not know. The reported s1, s2, s3 already
include their weight, so s1 + s2 + s3 == total.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

from ctxspell.ngram_model import NgramModel
from ctxspell.suggester import Candidate, DeleteIndex, candidates

logger = logging.getLogger(__name__)

DEFAULT_K = 10


@dataclass(frozen=True)
class Weights:
    w1: float = 1.0
    w2: float = 1.0
    w3: float = 1.0

    def __post_init__(self):
        values = (self.w1, self.w2, self.w3)
        if any(w < 0 for w in values):
            raise ValueError(f"weights must be non-negative, got {values}")
        if not any(values):
            raise ValueError("at least one weight must be positive")


class ContextScore(NamedTuple):
    s1: float
    s2: float
    s3: float
    total: float


@dataclass(frozen=True)
class ScoredSuggestion:
    word: str
    edit_distance: int
    s1: float
    s2: float
    s3: float
    total: float
    rank: int


@dataclass(frozen=True)
class RawScore:
    """Unweighted component sums for one candidate; weights are applied when ordering."""

    word: str
    edit_distance: int
    unigram: float
    bigram: float
    trigram: float
    unigram_count: int


def _raw_components(model: NgramModel, ids: Sequence[Optional[int]], i: int):
    n = len(ids)
    c = ids[i]
    unigram = model.cond_prob_ids((), c)

    bigram = 0.0
    if i >= 1:
        bigram += model.cond_prob_ids((ids[i - 1],), c)
    if i + 1 < n:
        bigram += model.cond_prob_ids((c,), ids[i + 1])

    trigram = 0.0
    if i >= 2:
        trigram += model.cond_prob_ids((ids[i - 2], ids[i - 1]), c)
    if i >= 1 and i + 1 < n:
        trigram += model.cond_prob_ids((ids[i - 1], c), ids[i + 1])
    if i + 2 < n:
        trigram += model.cond_prob_ids((c, ids[i + 1]), ids[i + 2])
    return unigram, bigram, trigram


def _check_index(tokens: Sequence[str], i: int) -> None:
    if not 0 <= i < len(tokens):
        raise IndexError(f"token index {i} out of range for sentence of {len(tokens)} tokens")


def context_score(
    model: NgramModel,
    tokens: Sequence[str],
    i: int,
    candidate: str,
    weights: Weights = Weights(),
) -> ContextScore:
    _check_index(tokens, i)
    ids = [model.resolve(t) for t in tokens]
    ids[i] = model.resolve(candidate)
    unigram, bigram, trigram = _raw_components(model, ids, i)
    s1, s2, s3 = weights.w1 * unigram, weights.w2 * bigram, weights.w3 * trigram
    return ContextScore(s1, s2, s3, s1 + s2 + s3)


def raw_scores(
    model: NgramModel,
    cands: Sequence[Candidate],
    tokens: Sequence[str],
    i: int,
) -> List[RawScore]:
    """Score every candidate against the sentence once, before weighting.

    Candidates equal to the token under test are dropped.
    """
    _check_index(tokens, i)
    ids = [model.resolve(t) for t in tokens]
    token = tokens[i]
    scored = []
    for cand in cands:
        if cand.word == token or cand.edit_distance == 0:
            continue
        ids[i] = model.resolve(cand.word)
        unigram, bigram, trigram = _raw_components(model, ids, i)
        scored.append(RawScore(
            word=cand.word,
            edit_distance=cand.edit_distance,
            unigram=unigram,
            bigram=bigram,
            trigram=trigram,
            unigram_count=model.unigram_count(cand.word),
        ))
    return scored


def order(raw: Sequence[RawScore], weights: Weights, k: int = DEFAULT_K) -> List[ScoredSuggestion]:
    """Apply weights and sort: total desc, then distance asc, unigram count desc, word."""
    weighted = []
    for r in raw:
        s1, s2, s3 = weights.w1 * r.unigram, weights.w2 * r.bigram, weights.w3 * r.trigram
        weighted.append((s1 + s2 + s3, s1, s2, s3, r))
    weighted.sort(key=lambda item: (-item[0], item[4].edit_distance, -item[4].unigram_count, item[4].word))
    return [
        ScoredSuggestion(r.word, r.edit_distance, s1, s2, s3, total, rank)
        for rank, (total, s1, s2, s3, r) in enumerate(weighted[:max(k, 0)], start=1)
    ]


def rank(
    model: NgramModel,
    index: DeleteIndex,
    tokens: Sequence[str],
    i: int,
    weights: Weights = Weights(),
    k: int = DEFAULT_K,
) -> List[ScoredSuggestion]:
    _check_index(tokens, i)
    cands = candidates(index, model, tokens[i])
    return order(raw_scores(model, cands, tokens, i), weights, k)
