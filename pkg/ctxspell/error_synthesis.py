"""
Synthetic typographic errors for evaluation datasets.

Three generators plant exactly one misspelled word in a clean sentence:

    random  insert, delete or substitute a uniformly random profile letter
    swap    transpose two adjacent unequal characters (always distance 2)
    bigram  replace the second character of a character bigram with another
            letter that follows the first character somewhere in the dictionary

A word is eligible when it is a dictionary word of at least three letters.
Corruptions that land on a dictionary word, shrink below three characters or
miss the requested distance are resampled up to MAX_TRIES times; after that
the sentence is skipped (the generator returns None).
"""

import logging
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ctxspell.language_profile import LanguageProfile, is_letters_only
from ctxspell.ngram_model import NgramModel
from ctxspell.suggester import levenshtein
from utils.io import iter_jsonl, read_json, write_json, write_jsonl

logger = logging.getLogger(__name__)

MAX_TRIES = 100
MIN_WORD_LEN = 3

Sentence = List[str]


class SynthesisError(ValueError):
    """Base class for dataset synthesis problems."""


class InsufficientSentencesError(SynthesisError):
    def __init__(self, achieved: Dict[str, int], requested: Dict[str, int], partial_records: list):
        shortfalls = ", ".join(
            f"{key} {achieved[key]}/{requested[key]}" for key in requested if achieved[key] < requested[key]
        )
        super().__init__(f"not enough clean sentences: {shortfalls}")
        self.achieved = achieved
        self.requested = requested
        self.partial_records = partial_records


class Generator(str, Enum):
    RANDOM = "random"
    SWAP = "swap"
    BIGRAM = "bigram"


@dataclass(frozen=True)
class PlanEntry:
    generator: Generator
    distance: int
    count: int

    def __post_init__(self):
        object.__setattr__(self, "generator", Generator(self.generator))
        if self.generator is Generator.SWAP and self.distance != 2:
            raise SynthesisError(f"swap errors are always distance 2, got {self.distance}")
        if self.distance not in (1, 2):
            raise SynthesisError(f"distance must be 1 or 2, got {self.distance}")
        if self.count < 1:
            raise SynthesisError(f"count must be positive, got {self.count}")

    @property
    def key(self) -> str:
        return f"{self.generator.value}_ed{self.distance}"


REFERENCE_PLAN: Tuple[PlanEntry, ...] = (
    PlanEntry(Generator.RANDOM, 1, 20_000),
    PlanEntry(Generator.RANDOM, 2, 20_000),
    PlanEntry(Generator.SWAP, 2, 20_000),
    PlanEntry(Generator.BIGRAM, 1, 40_000),
    PlanEntry(Generator.BIGRAM, 2, 40_000),
)


@dataclass(frozen=True)
class SynthRecord:
    sentence_tokens: List[str]
    target_index: int
    original: str
    corrupted: str
    generator: Generator
    edit_distance: int
    seed: int

    @property
    def corrupted_tokens(self) -> List[str]:
        tokens = list(self.sentence_tokens)
        tokens[self.target_index] = self.corrupted
        return tokens

    @property
    def corrupted_text(self) -> str:
        return " ".join(self.corrupted_tokens)

    def to_dict(self) -> dict:
        row = asdict(self)
        row["generator"] = self.generator.value
        return row

    @classmethod
    def from_dict(cls, row: dict) -> "SynthRecord":
        return cls(
            sentence_tokens=list(row["sentence_tokens"]),
            target_index=int(row["target_index"]),
            original=row["original"],
            corrupted=row["corrupted"],
            generator=Generator(row["generator"]),
            edit_distance=int(row["edit_distance"]),
            seed=int(row["seed"]),
        )


@dataclass
class CharBigramTable:
    """For each first character, its possible successors and their probabilities."""

    successors: Dict[str, Tuple[Tuple[str, ...], np.ndarray]] = field(default_factory=dict)

    def probabilities(self, ch: str) -> Dict[str, float]:
        if ch not in self.successors:
            return {}
        chars, probs = self.successors[ch]
        return dict(zip(chars, probs.tolist()))

    def can_replace(self, first: str, current: str) -> bool:
        """True when first has a successor other than current."""
        if first not in self.successors:
            return False
        chars = self.successors[first][0]
        return len(chars) > 1 or (len(chars) == 1 and chars[0] != current)

    def sample(self, first: str, exclude: str, rng: np.random.Generator) -> str:
        chars, probs = self.successors[first]
        keep = np.array([c != exclude for c in chars])
        p = probs[keep]
        return str(np.asarray(chars)[keep][rng.choice(len(p), p=p / p.sum())])


def build_char_bigram_table(
    model: NgramModel,
    profile: LanguageProfile,
    token_weighted: bool = False,
) -> CharBigramTable:
    """Count consecutive letter pairs over dictionary words and normalize per first letter.

    Each word counts once unless token_weighted, in which case pairs are
    weighted by the word's corpus frequency.
    """
    if len(model) == 0:
        raise SynthesisError("cannot build a character bigram table from an empty dictionary")
    letters = profile.letter_set
    counts: Dict[str, Counter] = defaultdict(Counter)
    for word_id, word in enumerate(model.words):
        weight = model.unigram_counts[word_id] if token_weighted else 1
        for a, b in zip(word, word[1:]):
            if a in letters and b in letters:
                counts[a][b] += weight

    table = CharBigramTable()
    for first in sorted(counts):
        chars = tuple(sorted(counts[first]))
        values = np.array([counts[first][c] for c in chars], dtype=np.float64)
        table.successors[first] = (chars, values / values.sum())
    logger.info("char bigram table built first_chars=%d token_weighted=%s", len(table.successors), token_weighted)
    return table


def _is_checkable_text(profile: LanguageProfile, text: str) -> bool:
    return len(text) >= MIN_WORD_LEN and is_letters_only(profile, text)


def _eligible_positions(model: NgramModel, profile: LanguageProfile, sentence: Sequence[str]) -> List[int]:
    # exact dictionary forms only; the suggester never returns a case-fallback spelling
    return [i for i, word in enumerate(sentence) if _is_checkable_text(profile, word) and word in model.word_ids]


def _accept(model: NgramModel, original: str, corrupted: str, distance: int) -> bool:
    return (
        len(corrupted) >= MIN_WORD_LEN
        and corrupted != original
        and not model.contains(corrupted)
        and levenshtein(original, corrupted) == distance
    )


def _random_edit(word: str, letters: Sequence[str], rng: np.random.Generator) -> str:
    op = rng.integers(3)
    if op == 0:
        pos = int(rng.integers(len(word) + 1))
        return word[:pos] + letters[rng.integers(len(letters))] + word[pos:]
    if not word:
        return word
    pos = int(rng.integers(len(word)))
    if op == 1:
        return word[:pos] + word[pos + 1:]
    return word[:pos] + letters[rng.integers(len(letters))] + word[pos + 1:]


def synth_random(
    model: NgramModel,
    profile: LanguageProfile,
    sentence: Sequence[str],
    distance: int,
    rng: np.random.Generator,
    seed: int = 0,
) -> Optional[SynthRecord]:
    eligible = _eligible_positions(model, profile, sentence)
    if not eligible:
        logger.debug("skip: no eligible word in %r", sentence)
        return None
    letters = profile.letters
    for _ in range(MAX_TRIES):
        i = eligible[rng.integers(len(eligible))]
        word = corrupted = sentence[i]
        for _ in range(distance):
            corrupted = _random_edit(corrupted, letters, rng)
        if _accept(model, word, corrupted, distance):
            return SynthRecord(list(sentence), i, word, corrupted, Generator.RANDOM, distance, seed)
    logger.debug("skip: random retries exhausted for %r", sentence)
    return None


def _unequal_pairs(word: str) -> List[int]:
    return [j for j in range(len(word) - 1) if word[j] != word[j + 1]]


def synth_swap(
    model: NgramModel,
    profile: LanguageProfile,
    sentence: Sequence[str],
    rng: np.random.Generator,
    seed: int = 0,
) -> Optional[SynthRecord]:
    eligible = [i for i in _eligible_positions(model, profile, sentence) if _unequal_pairs(sentence[i])]
    if not eligible:
        logger.debug("skip: no swappable word in %r", sentence)
        return None
    for _ in range(MAX_TRIES):
        i = eligible[rng.integers(len(eligible))]
        word = sentence[i]
        pairs = _unequal_pairs(word)
        j = pairs[rng.integers(len(pairs))]
        corrupted = word[:j] + word[j + 1] + word[j] + word[j + 2:]
        if _accept(model, word, corrupted, 2):
            return SynthRecord(list(sentence), i, word, corrupted, Generator.SWAP, 2, seed)
    logger.debug("skip: swap retries exhausted for %r", sentence)
    return None


def _replaceable_pairs(word: str, table: CharBigramTable) -> List[int]:
    return [j for j in range(len(word) - 1) if table.can_replace(word[j], word[j + 1])]


def synth_bigram(
    model: NgramModel,
    profile: LanguageProfile,
    table: CharBigramTable,
    sentence: Sequence[str],
    distance: int,
    rng: np.random.Generator,
    seed: int = 0,
) -> Optional[SynthRecord]:
    eligible = [i for i in _eligible_positions(model, profile, sentence) if _replaceable_pairs(sentence[i], table)]
    if not eligible:
        logger.debug("skip: no word with a replaceable bigram in %r", sentence)
        return None
    for _ in range(MAX_TRIES):
        i = eligible[rng.integers(len(eligible))]
        word = corrupted = sentence[i]
        for _ in range(distance):
            pairs = _replaceable_pairs(corrupted, table)
            if not pairs:
                break
            j = pairs[rng.integers(len(pairs))]
            replacement = table.sample(corrupted[j], corrupted[j + 1], rng)
            corrupted = corrupted[:j + 1] + replacement + corrupted[j + 2:]
        if _accept(model, word, corrupted, distance):
            return SynthRecord(list(sentence), i, word, corrupted, Generator.BIGRAM, distance, seed)
    logger.debug("skip: bigram retries exhausted for %r", sentence)
    return None


def clean_sentences(
    model: NgramModel,
    profile: LanguageProfile,
    sentences: Iterable[Sequence[str]],
) -> List[Sentence]:
    """Sentences in which the checker would flag nothing."""
    return [
        list(sentence) for sentence in sentences
        if sentence and not any(
            _is_checkable_text(profile, word) and not model.contains(word) for word in sentence
        )
    ]


def scaled_plan(divisor: int, plan: Sequence[PlanEntry] = REFERENCE_PLAN) -> List[PlanEntry]:
    if divisor < 1:
        raise SynthesisError(f"divisor must be at least 1, got {divisor}")
    return [PlanEntry(e.generator, e.distance, max(1, e.count // divisor)) for e in plan]


def plan_to_dicts(plan: Sequence[PlanEntry]) -> List[dict]:
    return [{"generator": e.generator.value, "distance": e.distance, "count": e.count} for e in plan]


def load_plan(path: Union[str, Path]) -> List[PlanEntry]:
    """Read a plan JSON: a list of entries or an object with a "plan" list."""
    try:
        data = read_json(path)
    except ValueError as e:
        raise SynthesisError(str(e)) from e
    entries = data.get("plan") if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise SynthesisError(f"{path}: expected a list of plan entries or an object with a \"plan\" list")
    try:
        return [PlanEntry(Generator(e["generator"]), int(e["distance"]), int(e["count"])) for e in entries]
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SynthesisError):
            raise
        raise SynthesisError(f"{path}: malformed plan entry ({e!r})") from e


def build_dataset(
    model: NgramModel,
    profile: LanguageProfile,
    sentences: Iterable[Sequence[str]],
    plan: Sequence[PlanEntry],
    rng_seed: int,
    table: Optional[CharBigramTable] = None,
) -> List[SynthRecord]:
    """Exactly entry.count records per plan entry, reproducible from rng_seed.

    Each entry draws from its own generator seeded from rng_seed, walks the
    clean sentences in a shuffled order and uses every sentence at most once.
    """
    pool = clean_sentences(model, profile, sentences)
    logger.info("synthesis pool clean_sentences=%d plan_entries=%d seed=%d", len(pool), len(plan), rng_seed)
    entry_seeds = [int(s) for s in np.random.SeedSequence(rng_seed).generate_state(len(plan))]
    if table is None and any(e.generator is Generator.BIGRAM for e in plan):
        table = build_char_bigram_table(model, profile)

    records: List[SynthRecord] = []
    requested: Dict[str, int] = {}
    achieved: Dict[str, int] = {}
    for entry, seed in zip(plan, entry_seeds):
        rng = np.random.default_rng(seed)
        requested[entry.key] = requested.get(entry.key, 0) + entry.count
        made = 0
        for idx in rng.permutation(len(pool)):
            if made == entry.count:
                break
            sentence = pool[idx]
            if entry.generator is Generator.RANDOM:
                record = synth_random(model, profile, sentence, entry.distance, rng, seed)
            elif entry.generator is Generator.SWAP:
                record = synth_swap(model, profile, sentence, rng, seed)
            else:
                record = synth_bigram(model, profile, table, sentence, entry.distance, rng, seed)
            if record is not None:
                records.append(record)
                made += 1
        achieved[entry.key] = achieved.get(entry.key, 0) + made
        logger.info("synth entry=%s requested=%d made=%d", entry.key, entry.count, made)

    if any(achieved[key] < requested[key] for key in requested):
        raise InsufficientSentencesError(achieved, requested, records)
    return records


def manifest_path(path: Union[str, Path]) -> Path:
    return Path(f"{path}.manifest.json")


def save_dataset(
    records: Sequence[SynthRecord],
    path: Union[str, Path],
    seed: int,
    plan: Sequence[PlanEntry],
) -> Path:
    """Write records as JSON Lines and the seed/plan manifest beside them."""
    write_jsonl((r.to_dict() for r in records), path)
    achieved = Counter(f"{r.generator.value}_ed{r.edit_distance}" for r in records)
    manifest = manifest_path(path)
    write_json({
        "seed": seed,
        "plan": plan_to_dicts(plan),
        "achieved": dict(sorted(achieved.items())),
        "n_records": len(records),
    }, manifest)
    return manifest


def load_dataset(path: Union[str, Path]) -> List[SynthRecord]:
    records = []
    line_number = 0
    try:
        for line_number, row in iter_jsonl(path):
            records.append(SynthRecord.from_dict(row))
    except (KeyError, TypeError) as e:
        raise SynthesisError(f"{path}:{line_number}: bad record ({e!r})") from e
    except ValueError as e:
        raise SynthesisError(f"{path}: bad record ({e})") from e
    return records
