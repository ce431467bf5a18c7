"""
Candidate generation with the symmetric delete algorithm.

Every dictionary word is indexed under each string reachable by deleting up to
max_distance of its characters. A query unites the index hits of its own
deletes; since two strings within Levenshtein distance d always share a common
d-delete, the union is a superset of the answer, and an exact Levenshtein check
filters it down.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set

from rapidfuzz.distance import Levenshtein

from ctxspell.ngram_model import NgramModel

logger = logging.getLogger(__name__)

DEFAULT_MAX_DISTANCE = 2


@dataclass(frozen=True)
class Candidate:
    word: str
    edit_distance: int


def levenshtein(a: str, b: str, cutoff: Optional[int] = None) -> int:
    """Plain Levenshtein (unit insert/delete/substitute). Above cutoff returns cutoff + 1."""
    if cutoff is None:
        return Levenshtein.distance(a, b)
    return Levenshtein.distance(a, b, score_cutoff=cutoff)


def deletes(word: str, max_distance: int) -> Set[str]:
    """All strings obtained by deleting up to max_distance characters, word included."""
    variants = {word}
    frontier = {word}
    for _ in range(max_distance):
        next_frontier = set()
        for item in frontier:
            for i in range(len(item)):
                variant = item[:i] + item[i + 1:]
                if variant not in variants:
                    variants.add(variant)
                    next_frontier.add(variant)
        frontier = next_frontier
    return variants


class DeleteIndex:
    def __init__(self, max_distance: int = DEFAULT_MAX_DISTANCE):
        if max_distance not in (1, 2):
            raise ValueError(f"max_distance must be 1 or 2, got {max_distance}")
        self.max_distance = max_distance
        self.variants: Dict[str, List[int]] = {}

    def __len__(self) -> int:
        return len(self.variants)

    def add(self, word: str, word_id: int) -> None:
        for variant in deletes(word, self.max_distance):
            self.variants.setdefault(variant, []).append(word_id)

    def lookup(self, variant: str) -> List[int]:
        return self.variants.get(variant, [])


def build_delete_index(model: NgramModel, max_distance: int = DEFAULT_MAX_DISTANCE) -> DeleteIndex:
    index = DeleteIndex(max_distance)
    for word_id, word in enumerate(model.words):
        index.add(word, word_id)
    logger.info("delete index built words=%d variants=%d max_distance=%d", len(model), len(index), max_distance)
    return index


def verify(token: str, words: Iterable[str], max_distance: int) -> List[Candidate]:
    found = []
    for word in words:
        if abs(len(word) - len(token)) > max_distance:
            continue
        distance = levenshtein(token, word, max_distance)
        if distance <= max_distance:
            found.append(Candidate(word, distance))
    found.sort(key=lambda c: (c.edit_distance, c.word))
    return found


def candidates(index: DeleteIndex, model: NgramModel, token: str) -> List[Candidate]:
    """Dictionary words within index.max_distance of token, sorted by (distance, word).

    A token that is itself a dictionary word comes back with distance 0.
    """
    hits: Set[int] = set()
    for variant in deletes(token, index.max_distance):
        hits.update(index.lookup(variant))
    words = model.words
    return verify(token, (words[word_id] for word_id in hits), index.max_distance)
