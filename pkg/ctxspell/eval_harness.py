"""
Evaluation: Precision@k and MRR over synthetic datasets and misspelling-pair
lists, false-positive rates on clean text, the n-gram weight sweep and the
candidate generation benchmark.

Percentages are on a 0-100 scale, MRR included. A planted error that is not
detected, or whose original word is not in the top k_max suggestions,
contributes reciprocal rank 0.
"""

import logging
import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ctxspell.baselines import candidates_baseline
from ctxspell.checker import check_sentence, summarize_timings
from ctxspell.error_synthesis import MIN_WORD_LEN, SynthRecord
from ctxspell.language_profile import LanguageProfile, is_letters_only
from ctxspell.ngram_model import NgramModel
from ctxspell.ranker import RawScore, Weights, order, raw_scores
from ctxspell.suggester import DeleteIndex, candidates, levenshtein
from utils.io import read_tsv, write_csv

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 3, 5, 10)
DEFAULT_K_MAX = 10
SWEEP_VALUES = tuple(10.0 ** i for i in range(9))
BENCH_METHODS = ("sda", "naive", "trie", "dawg", "bktree")


class EvaluationError(ValueError):
    """Evaluation input is empty or unusable."""


class BenchMismatchError(EvaluationError):
    def __init__(self, token: str, method: str, reference: str, missing: set, extra: set):
        super().__init__(
            f"candidate sets differ for {token!r}: {method} vs {reference} "
            f"(missing {sorted(missing)[:5]}, extra {sorted(extra)[:5]})"
        )
        self.token = token
        self.method = method


class PairMode(str, Enum):
    UNIGRAM_ONLY = "unigram_only"
    FULL_CONTEXT = "full_context"


@dataclass(frozen=True)
class MisspellingPair:
    misspelling: str
    correction: str


@dataclass
class MetricSummary:
    n_samples: int
    p_at: Dict[int, float]
    mrr: float


@dataclass
class LatencySummary:
    detect_us_per_token: float = 0.0
    suggest_ms_mean: float = 0.0
    suggest_ms_p99: float = 0.0
    rank_ms_mean: float = 0.0
    rank_ms_p99: float = 0.0


@dataclass
class DetectionStats:
    correct_known_pct: float
    misspelled_unknown_pct: float
    n_correct: int
    n_misspelled: int


@dataclass
class EvalResult:
    n_samples: int
    p_at: Dict[int, float]
    mrr: float
    undetected: int = 0
    by_generator: Dict[str, MetricSummary] = field(default_factory=dict)
    by_distance: Dict[int, MetricSummary] = field(default_factory=dict)
    latency: Optional[LatencySummary] = None
    detection: Optional[DetectionStats] = None


@dataclass
class FalsePositiveResult:
    total_words: int
    detected_known: int
    percent: float
    top_unknown: List[Tuple[str, int]]


def metrics_from_ranks(
    ranks: Sequence[Optional[int]],
    ks: Sequence[int] = DEFAULT_KS,
    k_max: int = DEFAULT_K_MAX,
) -> Tuple[Dict[int, float], float]:
    """P@k and MRR (both x100) from 1-based ranks; None marks a miss."""
    n = len(ranks)
    if n == 0:
        return {k: 0.0 for k in ks}, 0.0
    p_at = {k: 100.0 * sum(1 for r in ranks if r is not None and r <= k) / n for k in ks}
    # exactly rounded, so the result does not depend on record order
    mrr = 100.0 * math.fsum(1.0 / r for r in ranks if r is not None and r <= k_max) / n
    return p_at, mrr


def _rank_of(words: Sequence[str], expected: str) -> Optional[int]:
    for position, word in enumerate(words, start=1):
        if word == expected:
            return position
    return None


def _summaries(
    ranks: Sequence[Optional[int]],
    labels: Sequence,
    ks: Sequence[int],
    k_max: int,
) -> Dict:
    grouped: Dict = {}
    for r, label in zip(ranks, labels):
        grouped.setdefault(label, []).append(r)
    out = {}
    for label in sorted(grouped):
        p_at, mrr = metrics_from_ranks(grouped[label], ks, k_max)
        out[label] = MetricSummary(len(grouped[label]), p_at, mrr)
    return out


def evaluate_synthetic(
    model: NgramModel,
    index: DeleteIndex,
    profile: LanguageProfile,
    dataset: Sequence[SynthRecord],
    weights: Weights = Weights(),
    k_max: int = DEFAULT_K_MAX,
    ks: Sequence[int] = DEFAULT_KS,
) -> EvalResult:
    if not dataset:
        raise EvaluationError("dataset is empty")

    ranks: List[Optional[int]] = []
    reports = []
    suggest_ms: List[float] = []
    rank_ms: List[float] = []
    undetected = 0
    for record in dataset:
        report = check_sentence(model, index, profile, record.corrupted_text, weights, k_max)
        reports.append(report)
        if report.timings.n_errors:
            suggest_ms.append(report.timings.suggest_ms_per_error)
            rank_ms.append(report.timings.rank_ms_per_error)
        planted = next((e for e in report.errors if e.token_index == record.target_index), None)
        if planted is None:
            undetected += 1
            logger.debug("undetected planted error %r in %r", record.corrupted, record.corrupted_text)
            ranks.append(None)
            continue
        ranks.append(_rank_of([s.word for s in planted.suggestions], record.original))

    p_at, mrr = metrics_from_ranks(ranks, ks, k_max)
    timings = summarize_timings(reports)
    latency = LatencySummary(
        detect_us_per_token=timings.detect_us_per_token,
        suggest_ms_mean=timings.suggest_ms_per_error,
        suggest_ms_p99=float(np.percentile(suggest_ms, 99)) if suggest_ms else 0.0,
        rank_ms_mean=timings.rank_ms_per_error,
        rank_ms_p99=float(np.percentile(rank_ms, 99)) if rank_ms else 0.0,
    )
    result = EvalResult(
        n_samples=len(dataset),
        p_at=p_at,
        mrr=mrr,
        undetected=undetected,
        by_generator=_summaries(ranks, [r.generator.value for r in dataset], ks, k_max),
        by_distance=_summaries(ranks, [r.edit_distance for r in dataset], ks, k_max),
        latency=latency,
    )
    logger.info("synthetic eval n=%d p@1=%.2f p@10=%.2f mrr=%.2f undetected=%d",
                result.n_samples, p_at.get(1, 0.0), p_at.get(10, 0.0), mrr, undetected)
    return result


def load_pairs(path: Union[str, Path]) -> Tuple[List[MisspellingPair], int]:
    """Read misspelling<TAB>correction lines; returns (pairs, dropped line count).

    Blank lines are ignored. Lines without exactly two non-empty single-token
    fields are dropped.
    """
    try:
        rows = read_tsv(path)
    except ValueError as e:
        raise EvaluationError(str(e)) from e
    pairs = []
    dropped = 0
    for fields in rows:
        if fields == [""]:
            continue
        if len(fields) != 2:
            dropped += 1
            continue
        misspelling, correction = fields[0].strip(), fields[1].strip()
        if not misspelling or not correction or len(misspelling.split()) != 1 or len(correction.split()) != 1:
            dropped += 1
            continue
        pairs.append(MisspellingPair(misspelling, correction))
    logger.info("pairs loaded path=%s pairs=%d dropped=%d", path, len(pairs), dropped)
    return pairs, dropped


def edit_distance_distribution(pairs: Iterable[MisspellingPair]) -> Dict[int, int]:
    counts = Counter(levenshtein(p.misspelling, p.correction) for p in pairs)
    return dict(sorted(counts.items()))


def evaluate_pairs(
    model: NgramModel,
    index: DeleteIndex,
    pairs: Sequence[MisspellingPair],
    mode: Union[PairMode, str] = PairMode.UNIGRAM_ONLY,
    weights: Weights = Weights(),
    k_max: int = DEFAULT_K_MAX,
    ks: Sequence[int] = DEFAULT_KS,
) -> EvalResult:
    """Rank each misspelling in isolation; a misspelling found in the dictionary is a miss."""
    if not pairs:
        raise EvaluationError("no misspelling pairs to evaluate")
    mode = PairMode(mode)
    if mode is PairMode.UNIGRAM_ONLY:
        weights = Weights(weights.w1 if weights.w1 > 0 else 1.0, 0.0, 0.0)

    ranks: List[Optional[int]] = []
    n_known_corrections = 0
    n_unknown_misspellings = 0
    for pair in pairs:
        if model.contains(pair.correction):
            n_known_corrections += 1
        if model.contains(pair.misspelling):
            ranks.append(None)
            continue
        n_unknown_misspellings += 1
        cands = candidates(index, model, pair.misspelling)
        ranked = order(raw_scores(model, cands, [pair.misspelling], 0), weights, k_max)
        ranks.append(_rank_of([s.word for s in ranked], pair.correction))

    n = len(pairs)
    p_at, mrr = metrics_from_ranks(ranks, ks, k_max)
    detection = DetectionStats(
        correct_known_pct=100.0 * n_known_corrections / n,
        misspelled_unknown_pct=100.0 * n_unknown_misspellings / n,
        n_correct=n,
        n_misspelled=n,
    )
    distances = [levenshtein(p.misspelling, p.correction) for p in pairs]
    result = EvalResult(
        n_samples=n,
        p_at=p_at,
        mrr=mrr,
        undetected=n - n_unknown_misspellings,
        by_distance=_summaries(ranks, distances, ks, k_max),
        detection=detection,
    )
    logger.info("pair eval mode=%s n=%d p@1=%.2f mrr=%.2f", mode.value, n, p_at.get(1, 0.0), mrr)
    return result


def evaluate_false_positives(
    model: NgramModel,
    profile: LanguageProfile,
    sentences: Iterable[Sequence[str]],
    top_n: int = 20,
) -> FalsePositiveResult:
    """Share of checkable words in clean text that the model knows.

    No checkable words at all counts as 100%.
    """
    total = known = 0
    unknown: Counter = Counter()
    for sentence in sentences:
        for word in sentence:
            if len(word) < MIN_WORD_LEN or not is_letters_only(profile, word):
                continue
            total += 1
            if model.contains(word):
                known += 1
            else:
                unknown[word] += 1
    percent = 100.0 * known / total if total else 100.0
    logger.info("false positive eval words=%d known=%d percent=%.2f", total, known, percent)
    return FalsePositiveResult(total, known, percent, unknown.most_common(top_n))


@dataclass
class SweepRow:
    panel: str
    w1: float
    w2: float
    w3: float
    p_at_1: float = 0.0
    p_at_10: float = 0.0
    mrr: float = 0.0
    status: str = "ok"
    error: str = ""


@dataclass
class SweepResult:
    rows: List[SweepRow]
    best: Optional[SweepRow]


def _prepare_sweep(
    model: NgramModel,
    index: DeleteIndex,
    profile: LanguageProfile,
    dataset: Sequence[SynthRecord],
) -> List[Optional[Tuple[List[RawScore], str]]]:
    """Per record: unweighted candidate scores and the expected word, or None when undetected."""
    prepared = []
    for record in dataset:
        corrupted = record.corrupted
        if len(corrupted) < MIN_WORD_LEN or not is_letters_only(profile, corrupted) or model.contains(corrupted):
            prepared.append(None)
            continue
        cands = candidates(index, model, corrupted)
        prepared.append((raw_scores(model, cands, record.corrupted_tokens, record.target_index), record.original))
    return prepared


def sweep_weights(
    model: NgramModel,
    index: DeleteIndex,
    profile: LanguageProfile,
    dataset: Sequence[SynthRecord],
    grid: Optional[Mapping[str, Sequence[float]]] = None,
    pinned: float = 1.0,
    k_max: int = DEFAULT_K_MAX,
) -> SweepResult:
    """Vary one weight at a time over its grid values with the other two pinned.

    Candidate scores are computed once; each row only re-orders them.
    Duplicate weight triples across panels are evaluated once.
    """
    if not dataset:
        raise EvaluationError("dataset is empty")
    grid = dict(grid) if grid is not None else {name: SWEEP_VALUES for name in ("w1", "w2", "w3")}
    prepared = _prepare_sweep(model, index, profile, dataset)

    rows: List[SweepRow] = []
    seen = set()
    for panel in ("w1", "w2", "w3"):
        for value in grid.get(panel, ()):
            triple = {"w1": pinned, "w2": pinned, "w3": pinned}
            triple[panel] = float(value)
            key = (triple["w1"], triple["w2"], triple["w3"])
            if key in seen:
                continue
            seen.add(key)
            row = SweepRow(panel, *key)
            try:
                weights = Weights(*key)
                ranks = [
                    None if item is None else _rank_of([s.word for s in order(item[0], weights, k_max)], item[1])
                    for item in prepared
                ]
                p_at, row.mrr = metrics_from_ranks(ranks, (1, k_max), k_max)
                row.p_at_1, row.p_at_10 = p_at[1], p_at[k_max]
            except Exception as e:
                row.status, row.error = "error", str(e)
                logger.warning("sweep row failed weights=%s error=%s", key, e)
            rows.append(row)

    ok_rows = [r for r in rows if r.status == "ok"]
    best = max(ok_rows, key=lambda r: r.p_at_1) if ok_rows else None
    logger.info("sweep finished rows=%d failed=%d", len(rows), len(rows) - len(ok_rows))
    return SweepResult(rows, best)


def sample_bench_tokens(
    model: NgramModel,
    profile: LanguageProfile,
    lengths: Iterable[int],
    per_length: int,
    rng: np.random.Generator,
    max_tries: int = 1000,
) -> Dict[int, List[str]]:
    """Non-dictionary tokens of each exact length.

    Made by one substitution in a dictionary word of that length, or from
    random letters when the dictionary has no such word.
    """
    letters = profile.letters
    by_length: Dict[int, List[str]] = {}
    for word in model.words:
        if is_letters_only(profile, word):
            by_length.setdefault(len(word), []).append(word)

    tokens: Dict[int, List[str]] = {}
    for length in lengths:
        pool = by_length.get(length, [])
        found: List[str] = []
        for _ in range(max_tries):
            if len(found) == per_length:
                break
            if pool:
                word = pool[rng.integers(len(pool))]
                pos = int(rng.integers(length))
                token = word[:pos] + letters[rng.integers(len(letters))] + word[pos + 1:]
            else:
                token = "".join(letters[i] for i in rng.integers(len(letters), size=length))
            if not model.contains(token):
                found.append(token)
        tokens[length] = found
    return tokens


@dataclass
class BenchRow:
    token_length: int
    method: str
    mean_ms: float
    p99_ms: float
    n_tokens: int


def _lookup(method: str, model: NgramModel, index: DeleteIndex, token: str):
    if method == "sda":
        return candidates(index, model, token)
    return candidates_baseline(method, model, token, index.max_distance)


def bench_suggesters(
    model: NgramModel,
    index: DeleteIndex,
    tokens_by_length: Mapping[int, Sequence[str]],
    methods: Sequence[str] = BENCH_METHODS,
) -> List[BenchRow]:
    """Time each method per token length after checking all methods return the same candidates."""
    for method in methods:
        if method != "sda":
            # builds and caches the structure outside the timed region
            _lookup(method, model, index, "")

    for tokens in tokens_by_length.values():
        for token in tokens:
            reference = {c.word for c in _lookup(methods[0], model, index, token)}
            for method in methods[1:]:
                got = {c.word for c in _lookup(method, model, index, token)}
                if got != reference:
                    raise BenchMismatchError(token, method, methods[0], reference - got, got - reference)

    rows = []
    for length in sorted(tokens_by_length):
        tokens = tokens_by_length[length]
        if not tokens:
            continue
        for method in methods:
            times = []
            for token in tokens:
                started = time.perf_counter_ns()
                _lookup(method, model, index, token)
                times.append((time.perf_counter_ns() - started) / 1e6)
            rows.append(BenchRow(length, method, float(np.mean(times)), float(np.percentile(times, 99)), len(tokens)))
            logger.debug("bench length=%d method=%s mean_ms=%.3f", length, method, rows[-1].mean_ms)
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], path: Union[str, Path]) -> None:
    write_csv(
        ([r.panel, r.w1, r.w2, r.w3, f"{r.p_at_1:.4f}", f"{r.p_at_10:.4f}", f"{r.mrr:.4f}", r.status] for r in rows),
        path,
        header=["panel", "w1", "w2", "w3", "p_at_1", "p_at_10", "mrr", "status"],
    )


def eval_result_to_dict(result: EvalResult) -> dict:
    def summary(s: MetricSummary) -> dict:
        return {"n_samples": s.n_samples, "p_at": {str(k): v for k, v in s.p_at.items()}, "mrr": s.mrr}

    out = {
        "n_samples": result.n_samples,
        "p_at": {str(k): v for k, v in result.p_at.items()},
        "mrr": result.mrr,
        "undetected": result.undetected,
        "by_generator": {str(k): summary(v) for k, v in result.by_generator.items()},
        "by_distance": {str(k): summary(v) for k, v in result.by_distance.items()},
    }
    if result.latency is not None:
        out["latency"] = asdict(result.latency)
    if result.detection is not None:
        out["detection"] = asdict(result.detection)
    return out


def format_eval_table(result: EvalResult) -> str:
    ks = sorted(result.p_at)
    header = "".ljust(14) + "".join(f"P@{k}".rjust(9) for k in ks) + "MRR".rjust(9) + "N".rjust(9)

    def line(label: str, n: int, p_at: Mapping[int, float], mrr: float) -> str:
        return label.ljust(14) + "".join(f"{p_at.get(k, 0.0):9.2f}" for k in ks) + f"{mrr:9.2f}" + f"{n:9d}"

    lines = [header, line("all", result.n_samples, result.p_at, result.mrr)]
    for name, s in result.by_generator.items():
        lines.append(line(f"gen={name}", s.n_samples, s.p_at, s.mrr))
    for distance, s in result.by_distance.items():
        lines.append(line(f"ed={distance}", s.n_samples, s.p_at, s.mrr))
    lines.append(f"undetected: {result.undetected}")
    if result.latency is not None:
        lat = result.latency
        lines.append(
            f"detect {lat.detect_us_per_token:.2f} us/token | suggest {lat.suggest_ms_mean:.3f} ms/error "
            f"(p99 {lat.suggest_ms_p99:.3f}) | rank {lat.rank_ms_mean:.3f} ms/error (p99 {lat.rank_ms_p99:.3f})"
        )
    if result.detection is not None:
        det = result.detection
        lines.append(
            f"corrections known: {det.correct_known_pct:.2f}% | misspellings unknown: {det.misspelled_unknown_pct:.2f}%"
        )
    return "\n".join(lines)
