"""
Sentence checking: tokenize, flag non-words, suggest and rank corrections.

A token is flagged when it is a word (not number, foreign or punctuation),
consists of profile letters only, is at least MIN_ERROR_LEN characters long and
is unknown to the model. N-gram context for ranking is the sentence's word and
number tokens, the same units the model was built from.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List

from ctxspell.language_profile import LanguageProfile, is_letters_only
from ctxspell.ngram_model import NgramModel
from ctxspell.ranker import DEFAULT_K, ScoredSuggestion, Weights, order, raw_scores
from ctxspell.suggester import DeleteIndex, candidates
from ctxspell.tokenizer import Token, TokenKind, tokenize

logger = logging.getLogger(__name__)

MIN_ERROR_LEN = 3


@dataclass(frozen=True)
class SpellError:
    token_index: int
    text: str
    suggestions: List[ScoredSuggestion]


@dataclass
class StageTimings:
    detect_us_per_token: float = 0.0
    suggest_ms_per_error: float = 0.0
    rank_ms_per_error: float = 0.0
    n_tokens: int = 0
    n_errors: int = 0


@dataclass
class SpellReport:
    text: str
    tokens: List[Token]
    errors: List[SpellError] = field(default_factory=list)
    timings: StageTimings = field(default_factory=StageTimings)


def is_checkable(token: Token, profile: LanguageProfile) -> bool:
    return (
        token.kind is TokenKind.WORD
        and len(token.text) >= MIN_ERROR_LEN
        and is_letters_only(profile, token.text)
    )


def check_sentence(
    model: NgramModel,
    index: DeleteIndex,
    profile: LanguageProfile,
    text: str,
    weights: Weights = Weights(),
    k: int = DEFAULT_K,
) -> SpellReport:
    tokens = tokenize(text, profile)
    report = SpellReport(text=text, tokens=tokens)
    if not tokens:
        return report

    # token index -> position among word/number tokens
    context: List[str] = []
    positions: Dict[int, int] = {}
    for token_index, token in enumerate(tokens):
        if token.kind in (TokenKind.WORD, TokenKind.NUMBER):
            positions[token_index] = len(context)
            context.append(token.text)

    started = time.perf_counter_ns()
    flagged = [
        token_index for token_index, token in enumerate(tokens)
        if is_checkable(token, profile) and not model.contains(token.text)
    ]
    detect_ns = time.perf_counter_ns() - started

    suggest_ns = rank_ns = 0
    for token_index in flagged:
        text_i = tokens[token_index].text
        started = time.perf_counter_ns()
        cands = candidates(index, model, text_i)
        suggest_ns += time.perf_counter_ns() - started

        started = time.perf_counter_ns()
        suggestions = order(raw_scores(model, cands, context, positions[token_index]), weights, k)
        rank_ns += time.perf_counter_ns() - started
        report.errors.append(SpellError(token_index, text_i, suggestions))

    n_errors = len(flagged)
    report.timings = StageTimings(
        detect_us_per_token=detect_ns / 1e3 / len(tokens),
        suggest_ms_per_error=suggest_ns / 1e6 / n_errors if n_errors else 0.0,
        rank_ms_per_error=rank_ns / 1e6 / n_errors if n_errors else 0.0,
        n_tokens=len(tokens),
        n_errors=n_errors,
    )
    return report


def check_document(
    model: NgramModel,
    index: DeleteIndex,
    profile: LanguageProfile,
    lines: Iterable[str],
    weights: Weights = Weights(),
    k: int = DEFAULT_K,
) -> Iterator[SpellReport]:
    for line in lines:
        yield check_sentence(model, index, profile, line.rstrip("\r\n"), weights, k)


def summarize_timings(reports: Iterable[SpellReport]) -> StageTimings:
    """Detection weighted by tokens, suggestion and ranking weighted by errors."""
    detect = suggest = rank_total = 0.0
    n_tokens = n_errors = 0
    for report in reports:
        t = report.timings
        detect += t.detect_us_per_token * t.n_tokens
        suggest += t.suggest_ms_per_error * t.n_errors
        rank_total += t.rank_ms_per_error * t.n_errors
        n_tokens += t.n_tokens
        n_errors += t.n_errors
    return StageTimings(
        detect_us_per_token=detect / n_tokens if n_tokens else 0.0,
        suggest_ms_per_error=suggest / n_errors if n_errors else 0.0,
        rank_ms_per_error=rank_total / n_errors if n_errors else 0.0,
        n_tokens=n_tokens,
        n_errors=n_errors,
    )


def report_to_dict(report: SpellReport) -> dict:
    return {
        "text": report.text,
        "errors": [
            {
                "index": error.token_index,
                "token": error.text,
                "suggestions": [
                    {"word": s.word, "distance": s.edit_distance, "score": s.total}
                    for s in error.suggestions
                ],
            }
            for error in report.errors
        ],
        "timing": {
            "detect_us_per_token": report.timings.detect_us_per_token,
            "suggest_ms_per_error": report.timings.suggest_ms_per_error,
            "rank_ms_per_error": report.timings.rank_ms_per_error,
        },
    }


def report_to_tsv_rows(report: SpellReport) -> List[List[str]]:
    return [
        [str(error.token_index), error.text, s.word, str(s.edit_distance), f"{s.total:.6g}"]
        for error in report.errors
        for s in error.suggestions
    ]
