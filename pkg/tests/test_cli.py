import json

import pytest

from ctxspell import cli
from ctxspell.cli import main
from ctxspell.error_synthesis import manifest_path
from ctxspell.eval_harness import DEFAULT_K_MAX

TOY_FLAGS = ["--min-word-len", "1", "--min-word-freq", "0"]


@pytest.fixture
def toy_model_file(tmp_path):
    articles = tmp_path / "articles.txt"
    articles.write_text("the cat sat.\nthe cat ran.\n", encoding="utf-8")
    model = tmp_path / "toy.model"
    assert main(["build", "--articles", str(articles), "--model", str(model), *TOY_FLAGS]) == 0
    return model


@pytest.fixture
def corpus_file(tmp_path, corpus_factory):
    path = tmp_path / "corpus.txt"
    sentences = corpus_factory(seed=9, n_sentences=600, vocabulary_size=150)
    path.write_text("\n".join(" ".join(s) + "." for s in sentences) + "\n", encoding="utf-8")
    return path


def test_build_is_deterministic(tmp_path, toy_model_file):
    again = tmp_path / "again.model"
    assert main(["build", "--articles", str(tmp_path / "articles.txt"), "--model", str(again), *TOY_FLAGS]) == 0
    assert again.read_bytes() == toy_model_file.read_bytes()


def test_build_without_sources_is_a_usage_error(tmp_path):
    assert main(["build", "--model", str(tmp_path / "m.model")]) == 1


def test_suggest(capsys, toy_model_file):
    capsys.readouterr()
    assert main(["suggest", "--model", str(toy_model_file), "--token", "cqt", "--k", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[:2] for line in lines] == [["cat", "1"], ["sat", "2"]]


def test_check_json(tmp_path, toy_model_file):
    text = tmp_path / "in.txt"
    text.write_text("the cqt sat\nthe cat ran\n", encoding="utf-8")
    out = tmp_path / "out.jsonl"
    assert main(["check", "--model", str(toy_model_file), "--input", str(text), "--output", str(out)]) == 0
    reports = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert len(reports) == 2
    error = reports[0]["errors"][0]
    assert error["index"] == 1 and error["token"] == "cqt"
    assert error["suggestions"][0]["word"] == "cat"
    assert reports[1]["errors"] == []
    assert set(reports[0]["timing"]) == {"detect_us_per_token", "suggest_ms_per_error", "rank_ms_per_error"}


def test_check_tsv(tmp_path, toy_model_file):
    text = tmp_path / "in.txt"
    text.write_text("the cqt sat\n", encoding="utf-8")
    out = tmp_path / "out.tsv"
    assert main(["check", "--model", str(toy_model_file), "--input", str(text),
                 "--output", str(out), "--format", "tsv"]) == 0
    first = out.read_text(encoding="utf-8").splitlines()[0].split("\t")
    assert first[:4] == ["1", "cqt", "cat", "1"]


def test_eval_on_empty_dataset_is_a_data_error(tmp_path, toy_model_file):
    dataset = tmp_path / "empty.jsonl"
    dataset.write_text("", encoding="utf-8")
    assert main(["eval", "--model", str(toy_model_file), "--dataset", str(dataset)]) == 2


def test_missing_model_is_a_data_error(tmp_path):
    assert main(["info", "--model", str(tmp_path / "missing.model")]) == 2


def test_unknown_flag_is_a_usage_error(toy_model_file):
    assert main(["info", "--model", str(toy_model_file), "--no-such-flag"]) == 1


def test_bad_weights_are_a_usage_error(toy_model_file):
    assert main(["suggest", "--model", str(toy_model_file), "--token", "cqt",
                 "--w1", "0", "--w2", "0", "--w3", "0"]) == 1


def test_info(capsys, tmp_path, toy_model_file):
    dump = tmp_path / "toy.txt"
    capsys.readouterr()
    assert main(["info", "--model", str(toy_model_file), "--text-dump", str(dump)]) == 0
    out = capsys.readouterr().out
    assert "words: 4" in out
    assert "binary_to_text:" in out
    assert dump.exists()


def test_pairs_eval(capsys, tmp_path, toy_model_file):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("cqt\tcat\nthw\tthe\n", encoding="utf-8")
    results = tmp_path / "results.json"
    assert main(["eval", "--model", str(toy_model_file), "--pairs", str(pairs), "--output", str(results)]) == 0
    data = json.loads(results.read_text(encoding="utf-8"))
    assert data["n_samples"] == 2
    assert data["p_at"]["1"] == 100.0
    assert "detection" in data


def test_synth_eval_and_tune(tmp_path, corpus_file):
    model = tmp_path / "corpus.model"
    dataset = tmp_path / "dataset.jsonl"
    assert main(["build", "--articles", str(corpus_file), "--model", str(model), *TOY_FLAGS]) == 0
    assert main(["synth", "--model", str(model), "--input", str(corpus_file), "--output", str(dataset),
                 "--scale", "2000", "--seed", "3", *TOY_FLAGS]) == 0
    manifest = json.loads(manifest_path(dataset).read_text(encoding="utf-8"))
    assert manifest["seed"] == 3
    assert manifest["n_records"] == len(dataset.read_text(encoding="utf-8").splitlines())

    results = tmp_path / "results.json"
    assert main(["eval", "--model", str(model), "--dataset", str(dataset), "--output", str(results)]) == 0
    assert json.loads(results.read_text(encoding="utf-8"))["n_samples"] == manifest["n_records"]

    config = tmp_path / "sweep.json"
    config.write_text(json.dumps({"grid": {"w1": [1, 10], "w2": [1], "w3": [1, 100]}}), encoding="utf-8")
    table = tmp_path / "sweep.csv"
    assert main(["tune", "--model", str(model), "--dataset", str(dataset),
                 "--config", str(config), "--output", str(table)]) == 0
    assert len(table.read_text(encoding="utf-8").splitlines()) == 1 + 3


def test_fp(capsys, tmp_path, corpus_file):
    model = tmp_path / "corpus.model"
    assert main(["build", "--articles", str(corpus_file), "--model", str(model), *TOY_FLAGS]) == 0
    capsys.readouterr()
    assert main(["fp", "--model", str(model), "--input", str(corpus_file)]) == 0
    assert "percent: 100.00" in capsys.readouterr().out


def test_bench(capsys, toy_model_file):
    capsys.readouterr()
    assert main(["bench", "--model", str(toy_model_file), "--min-length", "3", "--max-length", "6",
                 "--per-length", "3", "--methods", "naive,sda"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "token_length\tmethod\tmean_ms\tp99_ms"
    assert len(lines) == 1 + 8


def test_bench_rejects_unknown_method(toy_model_file):
    assert main(["bench", "--model", str(toy_model_file), "--methods", "naive,quantum"]) == 1


def test_undecodable_check_input_is_a_data_error(tmp_path, toy_model_file):
    text = tmp_path / "latin1.txt"
    text.write_bytes(b"the cat sat\nthe caf\xe9 sat\n")
    out = tmp_path / "out.jsonl"
    assert main(["check", "--model", str(toy_model_file), "--input", str(text), "--output", str(out)]) == 2


def test_undecodable_pairs_are_a_data_error(tmp_path, toy_model_file):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_bytes(b"cqt\tcat\ncaf\xe9\tcafe\n")
    assert main(["eval", "--model", str(toy_model_file), "--pairs", str(pairs)]) == 2


def test_malformed_json_inputs_are_data_errors(tmp_path, toy_model_file):
    dataset = tmp_path / "dataset.jsonl"
    dataset.write_text(json.dumps({
        "sentence_tokens": ["the", "cat", "sat"], "target_index": 1, "original": "cat",
        "corrupted": "cqt", "generator": "random", "edit_distance": 1, "seed": 0,
    }) + "\n", encoding="utf-8")
    config = tmp_path / "sweep.json"
    config.write_text('{"grid": {"w1": [1, 10]', encoding="utf-8")
    assert main(["tune", "--model", str(toy_model_file), "--dataset", str(dataset), "--config", str(config)]) == 2

    text = tmp_path / "clean.txt"
    text.write_text("the cat sat.\n", encoding="utf-8")
    plan = tmp_path / "plan.json"
    for content in ("[{", json.dumps({"entries": []})):
        plan.write_text(content, encoding="utf-8")
        assert main(["synth", "--model", str(toy_model_file), "--input", str(text),
                     "--output", str(tmp_path / "out.jsonl"), "--plan", str(plan)]) == 2


def test_eval_cutoff_does_not_follow_k(monkeypatch, tmp_path, toy_model_file):
    seen = []
    real = cli.evaluate_pairs

    def recording(model, index, pairs, mode, weights, k_max):
        seen.append(k_max)
        return real(model, index, pairs, mode, weights, k_max)

    monkeypatch.setattr(cli, "evaluate_pairs", recording)
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("cqt\tcat\n", encoding="utf-8")
    assert main(["eval", "--model", str(toy_model_file), "--pairs", str(pairs), "--k", "20"]) == 0
    assert seen == [DEFAULT_K_MAX]
