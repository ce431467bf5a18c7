"""
Reference candidate generators used to benchmark the symmetric delete index.

All four return exactly the candidate set of suggester.candidates(): every
dictionary word within Levenshtein distance d of the token.

    naive   full scan with a cut-off Levenshtein per word
    trie    character trie walked depth first with one DP row per node,
            pruned when the row minimum exceeds d
    dawg    the same walk over a minimised acyclic word graph (shared suffixes)
    bktree  Burkhard-Keller metric tree
"""

import logging
import weakref
from typing import Dict, List, Optional, Sequence, Tuple

from ctxspell.ngram_model import NgramModel
from ctxspell.suggester import Candidate, levenshtein, verify

logger = logging.getLogger(__name__)

METHODS = ("naive", "trie", "dawg", "bktree")


class NaiveScan:
    def __init__(self, words: Sequence[str]):
        self.words = list(words)

    def lookup(self, token: str, max_distance: int) -> List[Candidate]:
        return verify(token, self.words, max_distance)


def _band_walk(root, token: str, max_distance: int) -> List[Candidate]:
    """Depth-first walk over a node graph with .children dict and .final flag.

    The word spelled along the path is rebuilt as we go, so nodes shared
    between words (DAWG) are handled the same way as trie nodes.
    """
    width = len(token)
    found: List[Candidate] = []
    stack: List[Tuple[object, str, List[int]]] = [(root, "", list(range(width + 1)))]
    while stack:
        node, prefix, previous_row = stack.pop()
        for ch, child in node.children.items():
            row = [previous_row[0] + 1]
            for i in range(1, width + 1):
                row.append(min(
                    row[i - 1] + 1,
                    previous_row[i] + 1,
                    previous_row[i - 1] + (token[i - 1] != ch),
                ))
            if min(row) > max_distance:
                continue
            word = prefix + ch
            if child.final and row[width] <= max_distance:
                found.append(Candidate(word, row[width]))
            stack.append((child, word, row))
    found.sort(key=lambda c: (c.edit_distance, c.word))
    return found


class _TrieNode:
    __slots__ = ("children", "final")

    def __init__(self):
        self.children: Dict[str, "_TrieNode"] = {}
        self.final = False


class CharTrie:
    def __init__(self, words: Sequence[str]):
        self.root = _TrieNode()
        for word in words:
            node = self.root
            for ch in word:
                node = node.children.setdefault(ch, _TrieNode())
            node.final = True

    def lookup(self, token: str, max_distance: int) -> List[Candidate]:
        return _band_walk(self.root, token, max_distance)


class _DawgNode:
    __slots__ = ("children", "final")

    def __init__(self):
        self.children: Dict[str, "_DawgNode"] = {}
        self.final = False

    def signature(self) -> Tuple:
        return (self.final, tuple((ch, id(child)) for ch, child in sorted(self.children.items())))


class Dawg:
    """Minimal acyclic word graph built incrementally from sorted words."""

    def __init__(self, words: Sequence[str]):
        self.root = _DawgNode()
        self._previous = ""
        self._unchecked: List[Tuple[_DawgNode, str, _DawgNode]] = []
        self._minimized: Dict[Tuple, _DawgNode] = {}
        for word in sorted(set(words)):
            self._insert(word)
        self._minimize(0)

    def _insert(self, word: str) -> None:
        common = 0
        for a, b in zip(word, self._previous):
            if a != b:
                break
            common += 1
        self._minimize(common)

        node = self._unchecked[-1][2] if self._unchecked else self.root
        for ch in word[common:]:
            child = _DawgNode()
            node.children[ch] = child
            self._unchecked.append((node, ch, child))
            node = child
        node.final = True
        self._previous = word

    def _minimize(self, down_to: int) -> None:
        for i in range(len(self._unchecked) - 1, down_to - 1, -1):
            parent, ch, child = self._unchecked[i]
            key = child.signature()
            if key in self._minimized:
                parent.children[ch] = self._minimized[key]
            else:
                self._minimized[key] = child
            self._unchecked.pop()

    def node_count(self) -> int:
        return len(self._minimized) + 1

    def lookup(self, token: str, max_distance: int) -> List[Candidate]:
        return _band_walk(self.root, token, max_distance)


class _BKNode:
    __slots__ = ("word", "children")

    def __init__(self, word: str):
        self.word = word
        self.children: Dict[int, "_BKNode"] = {}


class BKTree:
    def __init__(self, words: Sequence[str]):
        self.root: Optional[_BKNode] = None
        for word in words:
            self.add(word)

    def add(self, word: str) -> None:
        if self.root is None:
            self.root = _BKNode(word)
            return
        node = self.root
        while True:
            distance = levenshtein(word, node.word)
            if distance == 0:
                return
            child = node.children.get(distance)
            if child is None:
                node.children[distance] = _BKNode(word)
                return
            node = child

    def lookup(self, token: str, max_distance: int) -> List[Candidate]:
        found: List[Candidate] = []
        if self.root is None:
            return found
        stack = [self.root]
        while stack:
            node = stack.pop()
            distance = levenshtein(token, node.word)
            if distance <= max_distance:
                found.append(Candidate(node.word, distance))
            low, high = distance - max_distance, distance + max_distance
            stack.extend(child for d, child in node.children.items() if low <= d <= high)
        found.sort(key=lambda c: (c.edit_distance, c.word))
        return found


_BUILDERS = {
    "naive": NaiveScan,
    "trie": CharTrie,
    "dawg": Dawg,
    "bktree": BKTree,
}

_cache: "weakref.WeakKeyDictionary[NgramModel, Dict[str, object]]" = weakref.WeakKeyDictionary()


def build_baseline(method: str, model: NgramModel):
    if method not in _BUILDERS:
        raise ValueError(f"unknown baseline {method!r}, expected one of {', '.join(METHODS)}")
    structure = _BUILDERS[method](model.words)
    logger.info("baseline built method=%s words=%d", method, len(model))
    return structure


def candidates_baseline(method: str, model: NgramModel, token: str, max_distance: int) -> List[Candidate]:
    per_model = _cache.setdefault(model, {})
    if method not in per_model:
        per_model[method] = build_baseline(method, model)
    return per_model[method].lookup(token, max_distance)
