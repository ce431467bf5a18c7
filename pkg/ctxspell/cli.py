"""
ctxspell command line.

    build    corpus -> binary model
    check    text lines -> JSON Lines (or TSV) reports
    suggest  one token -> ranked corrections
    synth    clean text -> synthetic error dataset
    eval     dataset or misspelling pairs -> P@k / MRR
    fp       clean text -> share of words the model knows
    bench    candidate generation timings per token length
    tune     n-gram weight sweep
    info     model statistics

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence, TextIO

import numpy as np

from ctxspell.checker import check_document, report_to_dict, report_to_tsv_rows, summarize_timings
from ctxspell.corpus_ingest import (
    DEFAULT_MAX_ARTICLES,
    DEFAULT_MAX_SUBTITLE_FILES,
    CorpusError,
    CorpusSpec,
    IngestStats,
    ingest,
    read_lines,
    read_sentence_file,
)
from ctxspell.error_synthesis import (
    REFERENCE_PLAN,
    SynthesisError,
    build_char_bigram_table,
    build_dataset,
    load_dataset,
    load_plan,
    save_dataset,
    scaled_plan,
)
from ctxspell.eval_harness import (
    BENCH_METHODS,
    DEFAULT_K_MAX,
    SWEEP_VALUES,
    EvaluationError,
    PairMode,
    bench_suggesters,
    edit_distance_distribution,
    eval_result_to_dict,
    evaluate_false_positives,
    evaluate_pairs,
    evaluate_synthetic,
    format_eval_table,
    load_pairs,
    sample_bench_tokens,
    sweep_weights,
    write_sweep_csv,
)
from ctxspell.language_profile import ProfileError, load_profile
from ctxspell.ngram_model import (
    DEFAULT_MIN_WORD_FREQ,
    DEFAULT_MIN_WORD_LEN,
    ModelBuildError,
    ModelFileError,
    NgramModel,
    build_model,
    export_text_dump,
    load_model,
    save_model,
)
from ctxspell.ranker import DEFAULT_K, Weights, order, raw_scores
from ctxspell.suggester import DEFAULT_MAX_DISTANCE, build_delete_index, candidates
from utils.io import read_json, write_json, write_tsv

logger = logging.getLogger("ctxspell")

DEFAULT_PROFILE = Path(__file__).resolve().parent.parent / "profiles" / "en.profile"

DATA_ERRORS = (ProfileError, CorpusError, ModelBuildError, ModelFileError, SynthesisError, EvaluationError, OSError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    profile_path: Path
    model_path: Optional[Path]
    min_word_len: int
    min_word_freq: int
    weights: Weights
    k: int
    max_distance: int
    seed: int
    input_path: Optional[Path]
    output_path: Optional[Path]

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        try:
            weights = Weights(args.w1, args.w2, args.w3)
        except ValueError as e:
            raise UsageError(str(e)) from e
        if args.k < 1:
            raise UsageError(f"--k must be at least 1, got {args.k}")
        if args.min_word_len < 1:
            raise UsageError(f"--min-word-len must be at least 1, got {args.min_word_len}")
        if args.min_word_freq < 0:
            raise UsageError(f"--min-word-freq must be non-negative, got {args.min_word_freq}")
        return cls(
            subcommand=args.command,
            profile_path=Path(args.profile),
            model_path=Path(args.model) if getattr(args, "model", None) else None,
            min_word_len=args.min_word_len,
            min_word_freq=args.min_word_freq,
            weights=weights,
            k=args.k,
            max_distance=args.max_edit_distance,
            seed=args.seed,
            input_path=Path(args.input) if getattr(args, "input", None) else None,
            output_path=Path(args.output) if getattr(args, "output", None) else None,
        )


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--profile", default=str(DEFAULT_PROFILE), help="language profile file (default: English)")
    parent.add_argument("--log-level", default=os.environ.get("LOG_LEVEL", "INFO"),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    parent.add_argument("--seed", type=int, default=0, help="seed for every random choice (default: 0)")
    parent.add_argument("--w1", type=float, default=1.0, help="unigram weight")
    parent.add_argument("--w2", type=float, default=1.0, help="bigram weight")
    parent.add_argument("--w3", type=float, default=1.0, help="trigram weight")
    parent.add_argument("--k", type=int, default=DEFAULT_K, help="suggestions per error")
    parent.add_argument("--max-edit-distance", type=int, choices=[1, 2], default=DEFAULT_MAX_DISTANCE)
    parent.add_argument("--min-word-len", type=int, default=DEFAULT_MIN_WORD_LEN)
    parent.add_argument("--min-word-freq", type=int, default=DEFAULT_MIN_WORD_FREQ)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctxspell", description="Context-sensitive spell checker and evaluation workbench")
    parent = _common_parent()
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", parents=[parent], help="build a model from a corpus")
    p.add_argument("--articles", help="article text file or directory")
    p.add_argument("--subtitles", help="subtitle file or directory")
    p.add_argument("--max-articles", type=int, default=DEFAULT_MAX_ARTICLES)
    p.add_argument("--max-subtitle-files", type=int, default=DEFAULT_MAX_SUBTITLE_FILES)
    p.add_argument("--model", required=True, help="output model path")
    p.add_argument("--text-dump", help="also write a plain-text n-gram dump here")

    p = sub.add_parser("check", parents=[parent], help="check text lines")
    p.add_argument("--model", required=True)
    p.add_argument("--input", help="text file (default: stdin)")
    p.add_argument("--output", help="report file (default: stdout)")
    p.add_argument("--format", choices=["json", "tsv"], default="json")

    p = sub.add_parser("suggest", parents=[parent], help="rank corrections for one token")
    p.add_argument("--model", required=True)
    p.add_argument("--token", required=True)

    p = sub.add_parser("synth", parents=[parent], help="synthesize an error dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="clean text file or directory")
    p.add_argument("--output", required=True, help="dataset path (JSON Lines)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--plan", help="plan JSON file")
    group.add_argument("--scale", type=int, default=1, help="divide the reference plan counts by this")
    p.add_argument("--token-weighted", action="store_true", help="weight character bigrams by word frequency")

    p = sub.add_parser("eval", parents=[parent], help="evaluate ranking accuracy")
    p.add_argument("--model", required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--dataset", help="synthetic dataset (JSON Lines)")
    source.add_argument("--pairs", help="misspelling<TAB>correction file")
    p.add_argument("--mode", choices=[m.value for m in PairMode], default=PairMode.UNIGRAM_ONLY.value)
    p.add_argument("--output", help="write results JSON here")
    p.add_argument("--langfuse", action="store_true", help="publish scores to Langfuse")

    p = sub.add_parser("fp", parents=[parent], help="false positive rate on clean text")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="clean text file or directory")
    p.add_argument("--top", type=int, default=20, help="unknown words to list")

    p = sub.add_parser("bench", parents=[parent], help="time candidate generation methods")
    p.add_argument("--model", required=True)
    p.add_argument("--min-length", type=int, default=3)
    p.add_argument("--max-length", type=int, default=16)
    p.add_argument("--per-length", type=int, default=20)
    p.add_argument("--methods", default=",".join(BENCH_METHODS), help="comma separated, first is the reference")

    p = sub.add_parser("tune", parents=[parent], help="n-gram weight sweep")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", help="sweep config JSON (grid, pinned, k_max)")
    p.add_argument("--output", help="CSV path for the sweep table")
    p.add_argument("--langfuse", action="store_true")

    p = sub.add_parser("info", parents=[parent], help="model statistics")
    p.add_argument("--model", required=True)
    p.add_argument("--text-dump", help="write a text dump and report the size ratio")

    return parser


def _load(cfg: RunConfig):
    profile = load_profile(cfg.profile_path)
    model = load_model(cfg.model_path)
    index = build_delete_index(model, cfg.max_distance)
    return profile, model, index


def _open_output(path: Optional[Path]) -> TextIO:
    return open(path, "w", encoding="utf-8", newline="\n") if path else sys.stdout


def cmd_build(cfg: RunConfig, args) -> int:
    if not args.articles and not args.subtitles:
        raise UsageError("build needs --articles and/or --subtitles")
    profile = load_profile(cfg.profile_path)
    spec = CorpusSpec.from_dirs(args.articles, args.subtitles, args.max_articles, args.max_subtitle_files)
    stats = IngestStats()
    model = build_model(ingest(spec, profile, stats), cfg.min_word_len, cfg.min_word_freq, profile.language_code)
    size = save_model(model, cfg.model_path)
    print(f"model written: {cfg.model_path} ({size} bytes, {len(model)} words)")
    if args.text_dump:
        dump_size = export_text_dump(model, args.text_dump)
        print(f"text dump written: {args.text_dump} ({dump_size} bytes, binary/text {size / dump_size:.1%})")
    return 0


def _stdin_lines() -> Iterator[str]:
    try:
        for line in sys.stdin:
            yield line
    except UnicodeDecodeError as e:
        raise CorpusError(f"<stdin>: invalid UTF-8 ({e.reason})") from e


def cmd_check(cfg: RunConfig, args) -> int:
    profile, model, index = _load(cfg)
    source = read_lines(cfg.input_path) if cfg.input_path else _stdin_lines()
    out = _open_output(cfg.output_path)
    lines = 0

    def emitted():
        nonlocal lines
        for report in check_document(model, index, profile, source, cfg.weights, cfg.k):
            if args.format == "json":
                out.write(json.dumps(report_to_dict(report), ensure_ascii=False) + "\n")
            else:
                write_tsv(report_to_tsv_rows(report), out)
            lines += 1
            yield report

    try:
        timings = summarize_timings(emitted())
    finally:
        if out is not sys.stdout:
            out.close()
    logger.info("check finished lines=%d errors=%d detect_us_per_token=%.2f suggest_ms=%.3f rank_ms=%.3f",
                lines, timings.n_errors, timings.detect_us_per_token,
                timings.suggest_ms_per_error, timings.rank_ms_per_error)
    return 0


def cmd_suggest(cfg: RunConfig, args) -> int:
    _, model, index = _load(cfg)
    ranked = order(raw_scores(model, candidates(index, model, args.token), [args.token], 0), cfg.weights, cfg.k)
    write_tsv(([s.word, s.edit_distance, f"{s.total:.6g}"] for s in ranked), sys.stdout)
    return 0


def cmd_synth(cfg: RunConfig, args) -> int:
    profile = load_profile(cfg.profile_path)
    model = load_model(cfg.model_path)
    plan = load_plan(args.plan) if args.plan else scaled_plan(args.scale, REFERENCE_PLAN)
    sentences = read_sentence_file(cfg.input_path, profile)
    table = build_char_bigram_table(model, profile, token_weighted=args.token_weighted)
    records = build_dataset(model, profile, sentences, plan, cfg.seed, table)
    manifest = save_dataset(records, cfg.output_path, cfg.seed, plan)
    print(f"dataset written: {cfg.output_path} ({len(records)} records, manifest {manifest})")
    return 0


def cmd_eval(cfg: RunConfig, args) -> int:
    profile, model, index = _load(cfg)
    if args.dataset:
        dataset = load_dataset(args.dataset)
        result = evaluate_synthetic(model, index, profile, dataset, cfg.weights, DEFAULT_K_MAX)
    else:
        pairs, dropped = load_pairs(args.pairs)
        distribution = edit_distance_distribution(pairs)
        print(f"pairs: {len(pairs)} (dropped {dropped}); edit distances: "
              + ", ".join(f"{d}:{n}" for d, n in distribution.items()))
        result = evaluate_pairs(model, index, pairs, args.mode, cfg.weights, DEFAULT_K_MAX)
    print(format_eval_table(result))

    result_dict = eval_result_to_dict(result)
    if cfg.output_path:
        write_json(result_dict, cfg.output_path)
        print(f"results written: {cfg.output_path}")
    if args.langfuse:
        from utils.langfuse import publish_eval_result
        metadata = {
            "model": str(cfg.model_path),
            "source": args.dataset or args.pairs,
            "weights": [cfg.weights.w1, cfg.weights.w2, cfg.weights.w3],
        }
        if not publish_eval_result(result_dict, f"eval_{profile.language_code}", metadata):
            logger.warning("results not published to Langfuse")
    return 0


def cmd_fp(cfg: RunConfig, args) -> int:
    profile = load_profile(cfg.profile_path)
    model = load_model(cfg.model_path)
    result = evaluate_false_positives(model, profile, read_sentence_file(cfg.input_path, profile), args.top)
    print(f"words: {result.total_words}  known: {result.detected_known}  percent: {result.percent:.2f}")
    for word, n in result.top_unknown:
        print(f"  {word}\t{n}")
    return 0


def cmd_bench(cfg: RunConfig, args) -> int:
    profile, model, index = _load(cfg)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = sorted(set(methods) - set(BENCH_METHODS))
    if unknown or not methods:
        raise UsageError(f"unknown bench methods {unknown}, expected from {list(BENCH_METHODS)}")
    if args.min_length < 1 or args.max_length < args.min_length:
        raise UsageError("--min-length must be positive and not above --max-length")
    rng = np.random.default_rng(cfg.seed)
    tokens = sample_bench_tokens(model, profile, range(args.min_length, args.max_length + 1), args.per_length, rng)
    rows = bench_suggesters(model, index, tokens, methods)
    write_tsv(
        ([r.token_length, r.method, f"{r.mean_ms:.4f}", f"{r.p99_ms:.4f}"] for r in rows),
        sys.stdout,
        header=["token_length", "method", "mean_ms", "p99_ms"],
    )
    return 0


def cmd_tune(cfg: RunConfig, args) -> int:
    profile, model, index = _load(cfg)
    try:
        config = read_json(args.config) if args.config else {}
    except ValueError as e:
        raise EvaluationError(str(e)) from e
    if not isinstance(config, dict):
        raise EvaluationError(f"{args.config}: sweep config must be a JSON object")
    grid = config.get("grid") or {name: list(SWEEP_VALUES) for name in ("w1", "w2", "w3")}
    try:
        pinned = float(config.get("pinned", 1.0))
        k_max = int(config.get("k_max", DEFAULT_K_MAX))
    except (TypeError, ValueError) as e:
        raise EvaluationError(f"{args.config}: bad pinned or k_max ({e})") from e
    if not isinstance(grid, dict):
        raise EvaluationError(f"{args.config}: grid must map w1/w2/w3 to value lists")
    result = sweep_weights(model, index, profile, load_dataset(args.dataset), grid, pinned=pinned, k_max=k_max)
    for row in result.rows:
        print(f"{row.panel}\tw1={row.w1:g}\tw2={row.w2:g}\tw3={row.w3:g}\tP@1={row.p_at_1:.2f}\t{row.status}")
    if result.best is not None:
        b = result.best
        print(f"best: w1={b.w1:g} w2={b.w2:g} w3={b.w3:g} P@1={b.p_at_1:.2f}")
    if cfg.output_path:
        write_sweep_csv(result.rows, cfg.output_path)
    if args.langfuse or config.get("langfuse"):
        from utils.langfuse import publish_sweep
        if not publish_sweep(result.rows, f"sweep_{profile.language_code}"):
            logger.warning("sweep not published to Langfuse")
    return 0


def cmd_info(cfg: RunConfig, args) -> int:
    model: NgramModel = load_model(cfg.model_path)
    for key, value in model.stats().items():
        print(f"{key}: {value}")
    binary_size = cfg.model_path.stat().st_size
    print(f"file_bytes: {binary_size}")
    if args.text_dump:
        text_size = export_text_dump(model, args.text_dump)
        print(f"text_bytes: {text_size}")
        print(f"binary_to_text: {binary_size / text_size:.3f}")
    return 0


COMMANDS = {
    "build": cmd_build,
    "check": cmd_check,
    "suggest": cmd_suggest,
    "synth": cmd_synth,
    "eval": cmd_eval,
    "fp": cmd_fp,
    "bench": cmd_bench,
    "tune": cmd_tune,
    "info": cmd_info,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        from dotenv import load_dotenv
        load_dotenv()
    except ImportError:
        pass

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"ctxspell: error: {e}", file=sys.stderr)
        return 1
    except DATA_ERRORS as e:
        print(f"ctxspell: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
