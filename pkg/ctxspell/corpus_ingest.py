"""
Corpus ingestion: plain-text articles and subtitle files to sentence streams.

Articles are pre-extracted text, one document per file or per blank-line block.
Subtitle files use the usual block layout; index lines and timing lines
(containing "-->") are metadata and skipped. Sentences end at newlines and at
terminal punctuation (., !, ? plus the profile's extra terminators).
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ctxspell.language_profile import LanguageProfile
from ctxspell.tokenizer import TokenKind, tokenize

logger = logging.getLogger(__name__)

DEFAULT_MAX_ARTICLES = 1_000_000
DEFAULT_MAX_SUBTITLE_FILES = 10_000
BASE_TERMINATORS = (".", "!", "?")

_SUBTITLE_INDEX_RE = re.compile(r"^\d+$")

Sentence = List[str]


class SourceKind(str, Enum):
    ARTICLE = "article"
    SUBTITLE = "subtitle"


class CorpusError(ValueError):
    """Base class for corpus content problems."""


class CorpusEncodingError(CorpusError):
    def __init__(self, path: Path, byte_offset: int, reason: str):
        super().__init__(f"{path}: invalid UTF-8 at byte offset {byte_offset} ({reason})")
        self.path = path
        self.byte_offset = byte_offset


@dataclass
class CorpusSpec:
    sources: List[Tuple[Path, SourceKind]]
    max_articles: int = DEFAULT_MAX_ARTICLES
    max_subtitle_files: int = DEFAULT_MAX_SUBTITLE_FILES

    def __post_init__(self):
        if not self.sources:
            raise CorpusError("corpus needs at least one source")
        if self.max_articles <= 0 or self.max_subtitle_files <= 0:
            raise CorpusError("corpus caps must be positive")
        self.sources = [(Path(path), SourceKind(kind)) for path, kind in self.sources]

    @classmethod
    def from_dirs(
        cls,
        articles_dir: Optional[Union[str, Path]] = None,
        subtitles_dir: Optional[Union[str, Path]] = None,
        max_articles: int = DEFAULT_MAX_ARTICLES,
        max_subtitle_files: int = DEFAULT_MAX_SUBTITLE_FILES,
    ) -> "CorpusSpec":
        sources: List[Tuple[Path, SourceKind]] = []
        for directory, kind in ((articles_dir, SourceKind.ARTICLE), (subtitles_dir, SourceKind.SUBTITLE)):
            if directory is None:
                continue
            directory = Path(directory)
            if directory.is_file():
                sources.append((directory, kind))
                continue
            sources.extend((path, kind) for path in sorted(directory.iterdir()) if path.is_file())
        return cls(sources, max_articles=max_articles, max_subtitle_files=max_subtitle_files)


@dataclass
class IngestStats:
    articles_read: int = 0
    subtitle_files_read: int = 0
    sentences: int = 0
    tokens: int = 0


def read_lines(path: Path) -> Iterator[str]:
    """Yield decoded lines without line endings, reporting the byte offset of bad UTF-8."""
    offset = 0
    with open(path, "rb") as fh:
        for raw in fh:
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise CorpusEncodingError(path, offset + e.start, e.reason) from e
            offset += len(raw)
            yield line.rstrip("\r\n")


def split_sentences(line: str, profile: LanguageProfile) -> Iterator[Sentence]:
    """Split one line into sentences of word/number token texts."""
    terminators = set(BASE_TERMINATORS) | set(profile.terminators)
    current: Sentence = []
    for token in tokenize(line, profile):
        if token.kind in (TokenKind.WORD, TokenKind.NUMBER):
            current.append(token.text)
        elif token.text in terminators and current:
            yield current
            current = []
    if current:
        yield current


def sentences_from_lines(lines: Iterable[str], profile: LanguageProfile) -> Iterator[Sentence]:
    for line in lines:
        yield from split_sentences(line, profile)


def _article_documents(path: Path) -> Iterator[List[str]]:
    """Blank-line separated blocks of one article file."""
    block: List[str] = []
    for line in read_lines(path):
        if line.strip():
            block.append(line)
        elif block:
            yield block
            block = []
    if block:
        yield block


def _subtitle_text_lines(path: Path) -> Iterator[str]:
    for line in read_lines(path):
        stripped = line.strip()
        if not stripped or "-->" in stripped or _SUBTITLE_INDEX_RE.match(stripped):
            continue
        yield stripped


def ingest(
    spec: CorpusSpec,
    profile: LanguageProfile,
    stats: Optional[IngestStats] = None,
) -> Iterator[Sentence]:
    """Stream sentences from the configured sources in order, honouring the caps."""
    stats = stats if stats is not None else IngestStats()
    for path, kind in spec.sources:
        if kind is SourceKind.ARTICLE:
            if stats.articles_read >= spec.max_articles:
                continue
            for document in _article_documents(path):
                if stats.articles_read >= spec.max_articles:
                    break
                stats.articles_read += 1
                for sentence in sentences_from_lines(document, profile):
                    stats.sentences += 1
                    stats.tokens += len(sentence)
                    yield sentence
        else:
            if stats.subtitle_files_read >= spec.max_subtitle_files:
                continue
            stats.subtitle_files_read += 1
            for sentence in sentences_from_lines(_subtitle_text_lines(path), profile):
                stats.sentences += 1
                stats.tokens += len(sentence)
                yield sentence

    logger.info(
        "ingest finished articles=%d subtitle_files=%d sentences=%d tokens=%d",
        stats.articles_read, stats.subtitle_files_read, stats.sentences, stats.tokens,
    )


def read_sentence_file(path: Union[str, Path], profile: LanguageProfile) -> List[Sentence]:
    """All sentences of one plain-text file, or of every file in a directory."""
    path = Path(path)
    files: Sequence[Path] = sorted(p for p in path.iterdir() if p.is_file()) if path.is_dir() else [path]
    sentences: List[Sentence] = []
    for file_path in files:
        sentences.extend(sentences_from_lines(read_lines(file_path), profile))
    return sentences
