import os

import pytest

from ctxspell.corpus_ingest import (
    CorpusEncodingError,
    CorpusError,
    CorpusSpec,
    IngestStats,
    SourceKind,
    ingest,
    read_sentence_file,
    sentences_from_lines,
    split_sentences,
)
from ctxspell.language_profile import load_profile

SUBTITLE = """1
00:00:01,000 --> 00:00:03,000
Where are you going?

2
00:00:04,000 --> 00:00:06,500
Home. It is late
"""


def test_two_sentences_on_one_line(tmp_path, en_profile):
    path = tmp_path / "a.txt"
    path.write_text("The cat sat. The cat ran.\n", encoding="utf-8")
    spec = CorpusSpec([(path, SourceKind.ARTICLE)])
    assert list(ingest(spec, en_profile)) == [["The", "cat", "sat"], ["The", "cat", "ran"]]


def test_article_cap_stops_after_first_document(tmp_path, en_profile):
    paths = []
    for i, text in enumerate(["first one.", "second one.", "third one."]):
        path = tmp_path / f"{i}.txt"
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    spec = CorpusSpec([(p, SourceKind.ARTICLE) for p in paths], max_articles=1)
    stats = IngestStats()
    assert list(ingest(spec, en_profile, stats)) == [["first", "one"]]
    assert stats.articles_read == 1


def test_blank_lines_separate_articles_within_a_file(tmp_path, en_profile):
    path = tmp_path / "many.txt"
    path.write_text("alpha beta\n\ngamma delta\n\nepsilon\n", encoding="utf-8")
    spec = CorpusSpec([(path, SourceKind.ARTICLE)], max_articles=2)
    assert list(ingest(spec, en_profile)) == [["alpha", "beta"], ["gamma", "delta"]]


def test_subtitle_metadata_is_skipped(tmp_path, en_profile):
    path = tmp_path / "movie.srt"
    path.write_text(SUBTITLE, encoding="utf-8")
    spec = CorpusSpec([(path, SourceKind.SUBTITLE)])
    assert list(ingest(spec, en_profile)) == [
        ["Where", "are", "you", "going"],
        ["Home"],
        ["It", "is", "late"],
    ]


def test_subtitle_cap_counts_files(tmp_path, en_profile):
    for name in ("a.srt", "b.srt"):
        (tmp_path / name).write_text(SUBTITLE, encoding="utf-8")
    spec = CorpusSpec.from_dirs(subtitles_dir=tmp_path, max_subtitle_files=1)
    stats = IngestStats()
    list(ingest(spec, en_profile, stats))
    assert stats.subtitle_files_read == 1
    assert stats.sentences == 3


def test_more_generous_caps_never_yield_fewer_sentences(tmp_path, en_profile):
    for i in range(4):
        (tmp_path / f"{i}.txt").write_text(f"doc {i} here. and more.\n", encoding="utf-8")
    counts = [
        len(list(ingest(CorpusSpec.from_dirs(articles_dir=tmp_path, max_articles=cap), en_profile)))
        for cap in (1, 2, 3, 4, 5)
    ]
    assert counts == sorted(counts)


def test_invalid_utf8_reports_byte_offset(tmp_path, en_profile):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"good line\nok \xff here\n")
    spec = CorpusSpec([(path, SourceKind.ARTICLE)])
    with pytest.raises(CorpusEncodingError) as excinfo:
        list(ingest(spec, en_profile))
    assert excinfo.value.byte_offset == len(b"good line\nok ")


def test_missing_file_is_an_os_error(tmp_path, en_profile):
    spec = CorpusSpec([(tmp_path / "nope.txt", SourceKind.ARTICLE)])
    with pytest.raises(OSError):
        list(ingest(spec, en_profile))


def test_spec_validation():
    with pytest.raises(CorpusError):
        CorpusSpec([])
    with pytest.raises(CorpusError):
        CorpusSpec([("x.txt", "article")], max_articles=0)


def test_foreign_and_punctuation_are_dropped(en_profile):
    assert list(split_sentences("Tom’s $5 café!", en_profile)) == [["Tom", "s", "5", "caf"]]


def test_profile_terminators_split_sentences(profiles_dir):
    hi = load_profile(os.path.join(profiles_dir, "hi.profile"))
    assert len(list(sentences_from_lines(["राम घर गया। सीता आई।"], hi))) == 2


def test_read_sentence_file_accepts_directory(tmp_path, en_profile):
    (tmp_path / "b.txt").write_text("second file\n", encoding="utf-8")
    (tmp_path / "a.txt").write_text("first file\n", encoding="utf-8")
    assert read_sentence_file(tmp_path, en_profile) == [["first", "file"], ["second", "file"]]
