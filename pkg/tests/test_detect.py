from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from actorlens.detect import (
    DetectorConfig,
    classify_death,
    filter_low_level,
    is_afk_actor,
    is_feeder,
    player_deaths,
    suspected_deaths,
)
from actorlens.telemetry import DeathRecord

import oracles
from conftest import build_match, death_event


def _death(p2h=0.0, p2t=0.0, h2p=0.0, t2p=0.0, heroes=0, in_turret=False) -> DeathRecord:
    return DeathRecord(
        victim="P0",
        player_to_hero=p2h,
        player_to_turret=p2t,
        hero_to_player=h2p,
        turret_to_player=t2p,
        hero_count=heroes,
        in_turret=in_turret,
    )


SUSPECTED_ONE = _death(t2p=350.0)  # pure turret execution
UNSUSPECTED_ONE = _death(p2h=900.0, h2p=500.0, t2p=100.0, heroes=2)


@pytest.mark.parametrize(
    "idle,expected",
    [(0, False), (111, False), (119, False), (120, True), (121, True), (3600, True)],
)
def test_afk_truth_table(idle, expected):
    assert is_afk_actor(idle) is expected


def test_afk_threshold_is_configurable():
    cfg = DetectorConfig(afk_threshold_s=60)
    assert is_afk_actor(60, cfg)
    assert not is_afk_actor(59, cfg)


def test_detector_config_rejects_bad_values():
    with pytest.raises(ValueError):
        DetectorConfig(afk_threshold_s=0)
    with pytest.raises(ValueError):
        DetectorConfig(feeder_ratio_threshold=1.0)
    with pytest.raises(ValueError):
        DetectorConfig(feeder_count_threshold=0)


def test_oracle_grid_has_not_drifted():
    grid = oracles.feeder_grid()
    assert len(grid) == 2048
    assert oracles.table_digest(grid) == oracles.FEEDER_GRID_SHA256


def test_classify_death_matches_oracle_on_full_grid():
    mismatches = []
    for row in oracles.feeder_grid():
        verdict = classify_death(
            _death(
                p2h=row["p2h"],
                p2t=row["p2t"],
                h2p=row["h2p"],
                t2p=row["t2p"],
                heroes=row["heroes"],
                in_turret=row["in_turret"],
            )
        )
        got = (verdict.suspected, sorted(r.value for r in verdict.reasons))
        want = (row["suspected"], row["reasons"])
        if got != want:
            mismatches.append((row, got))
    assert mismatches == []


def test_spec_spot_verdicts():
    v = classify_death(_death(t2p=350.0, in_turret=True))
    assert sorted(r.value for r in v.reasons) == ["disguise_resistance", "turret_diving"]
    v = classify_death(_death(h2p=800.0, heroes=3))
    assert sorted(r.value for r in v.reasons) == ["disguise_resistance", "overextending"]
    v = classify_death(_death(p2h=600.0, p2t=200.0, h2p=500.0, t2p=100.0, heroes=2))
    assert not v.suspected


def test_ratio_boundary_is_inclusive():
    exactly = _death(p2h=40.0, h2p=100.0, heroes=1)
    assert classify_death(exactly).suspected
    above = _death(p2h=40.1, h2p=100.0, heroes=1)
    assert not classify_death(above).suspected


def test_ratio_skipped_at_zero_denominator():
    # killed by a neutral monster: no hero or turret damage received
    v = classify_death(_death(p2h=0.0, h2p=0.0, t2p=0.0))
    assert not v.suspected


def test_feeder_count_boundary():
    assert not is_feeder([SUSPECTED_ONE] * 2 + [UNSUSPECTED_ONE] * 5)
    assert is_feeder([SUSPECTED_ONE] * 3)
    assert not is_feeder([])


@given(
    base=st.lists(
        st.sampled_from([SUSPECTED_ONE, UNSUSPECTED_ONE]), min_size=0, max_size=12
    )
)
def test_adding_a_suspected_death_never_unflags(base):
    if is_feeder(base):
        assert is_feeder(list(base) + [SUSPECTED_ONE])


def test_player_deaths_selects_by_victim():
    match = build_match(
        key_events=[
            death_event(30.0, "P0", killer="P5", h2p=100.0, hero_count=1),
            death_event(60.0, "P1", killer="P5", h2p=100.0, hero_count=1),
            death_event(90.0, "P0", killer="P6", h2p=200.0, hero_count=2),
        ]
    )
    assert [d.hero_to_player for d in player_deaths(match, "P0")] == [100.0, 200.0]
    assert len(player_deaths(match, "P9")) == 0


def test_filter_low_level_unions_reasons():
    events = [
        death_event(60.0 * (k + 1), "P0", killer="P5", h2p=500.0, hero_count=3)
        for k in range(4)
    ]
    match = build_match(
        key_events=events,
        summaries={"P0": {"idle_time": 150.0, "die": 4}},
    )
    results = {r.player_id: r for r in filter_low_level(match)}
    flagged = results["P0"]
    assert flagged.low_level
    assert flagged.reasons == ("afk", "feeder")
    assert flagged.idle_time_s == 150.0
    assert flagged.suspected_death_count == 4
    assert all(not r.low_level for pid, r in results.items() if pid != "P0")


def test_suspected_deaths_returns_only_tripped_verdicts():
    match = build_match(
        key_events=[
            death_event(30.0, "P0", killer="P5", h2p=500.0, hero_count=3),
            death_event(90.0, "P0", killer="P5", p2h=900.0, h2p=100.0, hero_count=1),
        ],
        summaries={"P0": {"die": 2}},
    )
    verdicts = suspected_deaths(match, "P0")
    assert len(verdicts) == 1
    assert verdicts[0].death.hero_count == 3
