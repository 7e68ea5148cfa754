from __future__ import annotations

import json

import pytest

from actorlens.synth import generate_match, normal_script
from actorlens.telemetry import (
    InvariantViolation,
    MalformedDocument,
    SchemaViolation,
    TelemetryError,
    iter_corpus,
    match_to_dict,
    parse_match,
    serialize_match,
    validate_match,
)

from conftest import build_match, death_event


def _scripted_match(seed: int = 1):
    scripts = [normal_script(slot) for slot in range(10)]
    match, _ = generate_match(scripts, 1200, seed=seed)
    return match


def test_round_trip_is_identity():
    match = _scripted_match()
    blob = serialize_match(match)
    again = parse_match(blob)
    assert again == match
    assert serialize_match(again) == blob


def test_hand_built_match_is_valid():
    assert validate_match(build_match()) == []


def test_non_json_line_is_malformed():
    with pytest.raises(MalformedDocument) as err:
        parse_match("{nope")
    assert err.value.path == "$"


def test_missing_field_names_its_path():
    doc = json.loads(serialize_match(_scripted_match()))
    del doc["players"][3]["summary"]["coin"]
    with pytest.raises(SchemaViolation) as err:
        parse_match(json.dumps(doc))
    assert err.value.path == "$.players[3].summary.coin"


def test_wrong_schema_tag_rejected():
    doc = json.loads(serialize_match(_scripted_match()))
    doc["schema"] = "other/9"
    with pytest.raises(SchemaViolation):
        parse_match(json.dumps(doc))


def test_team_split_must_be_five_five():
    doc = json.loads(serialize_match(_scripted_match()))
    doc["players"][0]["team"] = "red"
    with pytest.raises(InvariantViolation) as err:
        parse_match(json.dumps(doc))
    assert "5 per team" in str(err.value)


def test_death_record_only_on_death_events():
    doc = json.loads(serialize_match(_scripted_match()))
    turret = next(e for e in doc["key_events"] if e["kind"] == "turret_destroyed")
    turret["death"] = {"p2h": 0, "p2t": 0, "h2p": 0, "t2p": 0, "hero_count": 0, "in_turret": False}
    with pytest.raises(SchemaViolation):
        parse_match(json.dumps(doc))


def test_hero_count_zero_damage_invariant():
    match = build_match(key_events=[death_event(30.0, "P0", h2p=0, hero_count=2)])
    problems = validate_match(match)
    assert any("hero_count" in p for p in problems)


def test_unsorted_events_rejected():
    match = build_match(
        key_events=[
            death_event(90.0, "P0", killer="P5", h2p=100),
            death_event(30.0, "P1", killer="P6", h2p=100),
        ]
    )
    assert any("sorted" in p for p in validate_match(match))


def test_frame_monotonicity_enforced():
    doc = json.loads(serialize_match(_scripted_match()))
    pid = doc["players"][0]["player_id"]
    doc["frames"][5]["per_player"][pid]["gold"] = 0
    with pytest.raises(InvariantViolation) as err:
        parse_match(json.dumps(doc))
    assert "non-decreasing" in str(err.value)


def test_negative_summary_field_rejected():
    doc = json.loads(serialize_match(_scripted_match()))
    doc["players"][0]["summary"]["idle_time"] = -1
    with pytest.raises(InvariantViolation):
        parse_match(json.dumps(doc))


def test_idle_time_capped_by_gametime():
    match = build_match(summaries={"P0": {"idle_time": 999.0}})
    assert any("idle_time" in p for p in validate_match(match))


def test_movement_cadence_checked():
    doc = json.loads(serialize_match(_scripted_match()))
    doc["movement"].pop()
    with pytest.raises(InvariantViolation) as err:
        parse_match(json.dumps(doc))
    assert "samples" in str(err.value)


def test_iter_corpus_reports_bad_lines_in_place(tmp_path):
    good = serialize_match(_scripted_match())
    path = tmp_path / "corpus.jsonl"
    path.write_text(good + "\n\nnot json\n" + good + "\n", encoding="utf-8")
    rows = list(iter_corpus(path))
    assert [line for line, _ in rows] == [1, 3, 4]
    assert isinstance(rows[1][1], TelemetryError)
    assert not isinstance(rows[0][1], TelemetryError)


def test_match_to_dict_is_plain_json():
    doc = match_to_dict(_scripted_match())
    json.dumps(doc)
    assert doc["schema"] == "actorlens/1"
