"""
N-gram model: word ids, unigram counts and an id-keyed trie of bigram and
trigram counts, plus the binary model file.

Counts are stored raw; conditional probabilities are computed on demand:

    P(w | a b) = c(a b w) / c(a b)      P(w | a) = c(a w) / c(a)      P(w) = c(w) / N

An unknown word or a zero denominator gives probability 0 (no smoothing).

Model file (little-endian):

    magic "CSPK" | version u16 | payload length u64 | payload | CRC32(payload) u32

    payload: language code (u16 length + UTF-8), min_word_len u32,
             min_word_freq u32, total_unigrams u64, word count u32,
             per word: u16 length + UTF-8 + u64 count (table index = id),
             bigram section: for every head id, varint child count then
                 (varint child id delta, varint count) pairs by child id,
             trigram section: the same, for every stored bigram in bigram order.
"""

import logging
import struct
import zlib
from array import array
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ctxspell.varint import VarintTruncatedError, decode_varint, encode_varint

logger = logging.getLogger(__name__)

MAGIC = b"CSPK"
FORMAT_VERSION = 1
DEFAULT_MIN_WORD_LEN = 2
DEFAULT_MIN_WORD_FREQ = 5

_HEADER = struct.Struct("<4sHQ")
_CRC = struct.Struct("<I")


class ModelBuildError(ValueError):
    pass


class ModelFileError(ValueError):
    """Base class for model file problems."""


class ModelFormatError(ModelFileError):
    pass


class ModelVersionError(ModelFileError):
    pass


class ModelChecksumError(ModelFileError):
    pass


class ModelTruncatedError(ModelFileError):
    pass


class WordIdMap:
    """Bidirectional word <-> dense id map."""

    def __init__(self, words: Sequence[str]):
        self._words: List[str] = list(words)
        self._ids: Dict[str, int] = {word: i for i, word in enumerate(self._words)}
        if len(self._ids) != len(self._words):
            raise ModelBuildError("duplicate words in word table")

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._words)

    def id_of(self, word: str) -> Optional[int]:
        return self._ids.get(word)

    def word_of(self, word_id: int) -> str:
        return self._words[word_id]

    @property
    def words(self) -> Sequence[str]:
        return self._words


class IdTrie:
    """Word-level trie keyed by ids.

    Depth-1 children of a head id carry bigram counts, depth-2 children carry
    trigram counts.
    """

    def __init__(self):
        self.bigrams: Dict[int, Dict[int, int]] = {}
        self.trigrams: Dict[int, Dict[int, Dict[int, int]]] = {}

    def add_bigram(self, a: int, b: int, n: int = 1) -> None:
        children = self.bigrams.setdefault(a, {})
        children[b] = children.get(b, 0) + n

    def add_trigram(self, a: int, b: int, c: int, n: int = 1) -> None:
        children = self.trigrams.setdefault(a, {}).setdefault(b, {})
        children[c] = children.get(c, 0) + n

    def bigram_count(self, a: int, b: int) -> int:
        children = self.bigrams.get(a)
        return children.get(b, 0) if children else 0

    def trigram_count(self, a: int, b: int, c: int) -> int:
        level = self.trigrams.get(a)
        if not level:
            return 0
        children = level.get(b)
        return children.get(c, 0) if children else 0

    def trigram_children(self, a: int, b: int) -> Dict[int, int]:
        return self.trigrams.get(a, {}).get(b, {})

    def n_bigrams(self) -> int:
        return sum(len(children) for children in self.bigrams.values())

    def n_trigrams(self) -> int:
        return sum(len(children) for level in self.trigrams.values() for children in level.values())


class NgramModel:
    def __init__(
        self,
        language_code: str,
        word_ids: WordIdMap,
        unigram_counts: Sequence[int],
        trie: IdTrie,
        min_word_len: int = DEFAULT_MIN_WORD_LEN,
        min_word_freq: int = DEFAULT_MIN_WORD_FREQ,
        total_unigrams: Optional[int] = None,
    ):
        if len(unigram_counts) != len(word_ids):
            raise ModelBuildError("unigram table and word table differ in length")
        self.language_code = language_code
        self.word_ids = word_ids
        self.unigram_counts = list(unigram_counts)
        self.trie = trie
        self.min_word_len = min_word_len
        self.min_word_freq = min_word_freq
        self.total_unigrams = sum(self.unigram_counts) if total_unigrams is None else total_unigrams

    def __len__(self) -> int:
        return len(self.word_ids)

    @property
    def words(self) -> Sequence[str]:
        return self.word_ids.words

    def resolve(self, word: str) -> Optional[int]:
        """Id of word; a capitalised word falls back to its first-letter-lowercased form."""
        word_id = self.word_ids.id_of(word)
        if word_id is None and word and word[0].isupper():
            word_id = self.word_ids.id_of(word[0].lower() + word[1:])
        return word_id

    def contains(self, word: str) -> bool:
        return self.resolve(word) is not None

    def unigram_count(self, word: str) -> int:
        word_id = self.resolve(word)
        return 0 if word_id is None else self.unigram_counts[word_id]

    def count(self, *words: str) -> int:
        """Raw count of a 1-, 2- or 3-gram; 0 when any word is unknown."""
        ids = [self.resolve(word) for word in words]
        if not ids or len(ids) > 3:
            raise ValueError(f"count takes 1 to 3 words, got {len(ids)}")
        if any(word_id is None for word_id in ids):
            return 0
        if len(ids) == 1:
            return self.unigram_counts[ids[0]]
        if len(ids) == 2:
            return self.trie.bigram_count(ids[0], ids[1])
        return self.trie.trigram_count(ids[0], ids[1], ids[2])

    def cond_prob_ids(self, context: Tuple[Optional[int], ...], word_id: Optional[int]) -> float:
        if word_id is None or any(c is None for c in context):
            return 0.0
        if not context:
            return self.unigram_counts[word_id] / self.total_unigrams if self.total_unigrams else 0.0
        if len(context) == 1:
            denominator = self.unigram_counts[context[0]]
            numerator = self.trie.bigram_count(context[0], word_id)
        elif len(context) == 2:
            denominator = self.trie.bigram_count(context[0], context[1])
            numerator = self.trie.trigram_count(context[0], context[1], word_id)
        else:
            raise ValueError(f"context holds at most 2 words, got {len(context)}")
        return numerator / denominator if denominator else 0.0

    def cond_prob(self, context: Sequence[str], word: str) -> float:
        return self.cond_prob_ids(tuple(self.resolve(c) for c in context), self.resolve(word))

    def successors(self, word: str) -> Dict[str, int]:
        word_id = self.resolve(word)
        if word_id is None:
            return {}
        children = self.trie.bigrams.get(word_id, {})
        return {self.word_ids.word_of(child): n for child, n in children.items()}

    def stats(self) -> Dict[str, Union[str, int]]:
        return {
            "language": self.language_code,
            "words": len(self.word_ids),
            "bigrams": self.trie.n_bigrams(),
            "trigrams": self.trie.n_trigrams(),
            "total_unigrams": self.total_unigrams,
            "min_word_len": self.min_word_len,
            "min_word_freq": self.min_word_freq,
        }


def build_model(
    stream: Iterable[Sequence[str]],
    min_word_len: int = DEFAULT_MIN_WORD_LEN,
    min_word_freq: int = DEFAULT_MIN_WORD_FREQ,
    language_code: str = "und",
) -> NgramModel:
    """Count n-grams over a sentence stream.

    Words survive when len >= min_word_len and frequency > min_word_freq. Only
    bigram/trigram windows whose every word survives are stored. Ids go by
    descending frequency, ties lexicographic.
    """
    provisional: Dict[str, int] = {}
    counts: List[int] = []
    sentences: List[array] = []
    for sentence in stream:
        ids = array("l")
        for word in sentence:
            pid = provisional.get(word)
            if pid is None:
                pid = len(counts)
                provisional[word] = pid
                counts.append(0)
            counts[pid] += 1
            ids.append(pid)
        if ids:
            sentences.append(ids)

    if not sentences:
        raise ModelBuildError("cannot build a model from an empty sentence stream")

    survivors = [
        word for word, pid in provisional.items()
        if len(word) >= min_word_len and counts[pid] > min_word_freq
    ]
    survivors.sort(key=lambda word: (-counts[provisional[word]], word))
    remap = [-1] * len(counts)
    for new_id, word in enumerate(survivors):
        remap[provisional[word]] = new_id

    trie = IdTrie()
    for ids in sentences:
        mapped = [remap[pid] for pid in ids]
        for j in range(len(mapped) - 1):
            a, b = mapped[j], mapped[j + 1]
            if a < 0 or b < 0:
                continue
            trie.add_bigram(a, b)
            if j + 2 < len(mapped) and mapped[j + 2] >= 0:
                trie.add_trigram(a, b, mapped[j + 2])

    model = NgramModel(
        language_code=language_code,
        word_ids=WordIdMap(survivors),
        unigram_counts=[counts[provisional[word]] for word in survivors],
        trie=trie,
        min_word_len=min_word_len,
        min_word_freq=min_word_freq,
    )
    if not survivors:
        logger.warning("no word passed the thresholds min_word_len=%d min_word_freq=%d", min_word_len, min_word_freq)
    logger.info(
        "model built sentences=%d raw_types=%d words=%d bigrams=%d trigrams=%d",
        len(sentences), len(counts), len(model), trie.n_bigrams(), trie.n_trigrams(),
    )
    return model


def _put_str(out: bytearray, text: str) -> None:
    encoded = text.encode("utf-8")
    out += struct.pack("<H", len(encoded))
    out += encoded


def _put_children(out: bytearray, children: Dict[int, int]) -> None:
    encode_varint(len(children), out)
    previous = 0
    for child in sorted(children):
        encode_varint(child - previous, out)
        encode_varint(children[child], out)
        previous = child


def serialize_model(model: NgramModel) -> bytes:
    payload = bytearray()
    _put_str(payload, model.language_code)
    payload += struct.pack("<IIQ", model.min_word_len, model.min_word_freq, model.total_unigrams)
    payload += struct.pack("<I", len(model.word_ids))
    for word, n in zip(model.word_ids.words, model.unigram_counts):
        _put_str(payload, word)
        payload += struct.pack("<Q", n)

    trie = model.trie
    for head in range(len(model.word_ids)):
        _put_children(payload, trie.bigrams.get(head, {}))
    for head in range(len(model.word_ids)):
        for child in sorted(trie.bigrams.get(head, {})):
            _put_children(payload, trie.trigram_children(head, child))

    header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(payload))
    return header + bytes(payload) + _CRC.pack(zlib.crc32(payload) & 0xFFFFFFFF)


def save_model(model: NgramModel, path: Union[str, Path]) -> int:
    """Write the model file and return its size in bytes."""
    data = serialize_model(model)
    Path(path).write_bytes(data)
    logger.info("model saved path=%s bytes=%d", path, len(data))
    return len(data)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def unpack(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ModelFormatError(f"payload ends inside a fixed-width field at {self.pos}")
        values = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return values

    def text(self) -> str:
        (length,) = self.unpack("<H")
        raw = self.data[self.pos:self.pos + length]
        if len(raw) != length:
            raise ModelFormatError(f"payload ends inside a string at {self.pos}")
        self.pos += length
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"word table holds invalid UTF-8: {e}") from e

    def varint(self) -> int:
        try:
            value, self.pos = decode_varint(self.data, self.pos)
        except VarintTruncatedError as e:
            raise ModelFormatError(str(e)) from e
        return value

    def children(self, vocabulary_size: int) -> Dict[int, int]:
        children: Dict[int, int] = {}
        child = 0
        for _ in range(self.varint()):
            child += self.varint()
            if child >= vocabulary_size:
                raise ModelFormatError(f"child id {child} outside vocabulary of {vocabulary_size}")
            children[child] = self.varint()
        return children


def deserialize_model(data: bytes) -> NgramModel:
    if len(data) < len(MAGIC):
        raise ModelTruncatedError("file shorter than the magic bytes")
    if data[:len(MAGIC)] != MAGIC:
        raise ModelFormatError(f"bad magic {data[:len(MAGIC)]!r}, expected {MAGIC!r}")
    if len(data) < _HEADER.size:
        raise ModelTruncatedError("file shorter than the header")
    _, version, payload_length = _HEADER.unpack_from(data, 0)
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"model format version {version}, this build reads version {FORMAT_VERSION}")

    expected_size = _HEADER.size + payload_length + _CRC.size
    if len(data) < expected_size:
        raise ModelTruncatedError(f"file has {len(data)} bytes, header announces {expected_size}")
    if len(data) > expected_size:
        raise ModelFormatError(f"{len(data) - expected_size} trailing bytes after checksum")

    payload = data[_HEADER.size:_HEADER.size + payload_length]
    (stored_crc,) = _CRC.unpack_from(data, _HEADER.size + payload_length)
    if zlib.crc32(payload) & 0xFFFFFFFF != stored_crc:
        raise ModelChecksumError("payload checksum mismatch")

    reader = _Reader(payload)
    language_code = reader.text()
    min_word_len, min_word_freq, total_unigrams = reader.unpack("<IIQ")
    (vocabulary_size,) = reader.unpack("<I")
    words: List[str] = []
    counts: List[int] = []
    for _ in range(vocabulary_size):
        words.append(reader.text())
        counts.append(reader.unpack("<Q")[0])

    trie = IdTrie()
    for head in range(vocabulary_size):
        children = reader.children(vocabulary_size)
        if children:
            trie.bigrams[head] = children
    for head in range(vocabulary_size):
        for child in sorted(trie.bigrams.get(head, {})):
            continuations = reader.children(vocabulary_size)
            if continuations:
                trie.trigrams.setdefault(head, {})[child] = continuations
    if reader.pos != len(payload):
        raise ModelFormatError(f"{len(payload) - reader.pos} unread payload bytes")

    return NgramModel(
        language_code=language_code,
        word_ids=WordIdMap(words),
        unigram_counts=counts,
        trie=trie,
        min_word_len=min_word_len,
        min_word_freq=min_word_freq,
        total_unigrams=total_unigrams,
    )


def load_model(path: Union[str, Path]) -> NgramModel:
    model = deserialize_model(Path(path).read_bytes())
    logger.info("model loaded path=%s words=%d", path, len(model))
    return model


def export_text_dump(model: NgramModel, path: Union[str, Path]) -> int:
    """Plain-text dump of every stored n-gram ("w count", "w w count", "w w w count")."""
    words = model.word_ids.words
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word, n in zip(words, model.unigram_counts):
            fh.write(f"{word} {n}\n")
        for head in sorted(model.trie.bigrams):
            for child, n in sorted(model.trie.bigrams[head].items()):
                fh.write(f"{words[head]} {words[child]} {n}\n")
        for head in sorted(model.trie.trigrams):
            for child in sorted(model.trie.trigrams[head]):
                for grandchild, n in sorted(model.trie.trigrams[head][child].items()):
                    fh.write(f"{words[head]} {words[child]} {words[grandchild]} {n}\n")
    size = Path(path).stat().st_size
    logger.info("text dump written path=%s bytes=%d", path, size)
    return size
