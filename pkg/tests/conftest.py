from __future__ import annotations

import math
from pathlib import Path

import pytest

from actorlens.synth import generate_corpus, read_ground_truth
from actorlens.telemetry import (
    BattleResult,
    DeathRecord,
    FrameStats,
    KeyEvent,
    KeyEventKind,
    Lane,
    MatchRecord,
    MatchSummaryStats,
    MovementSample,
    PlayerMatch,
    PlayerProfile,
    Team,
    TimeSeriesFrame,
)

LANES = (Lane.TOP, Lane.JUNGLE, Lane.MID, Lane.BOTTOM, Lane.SUPPORT)

SUMMARY_ZERO = dict(
    kills=0,
    die=0,
    assistant=0,
    dmgtotal=0,
    dmgtohero=0,
    towerhurt=0,
    rcvdmgfromall=0,
    rcvdmgfromhero=0,
    rcvdmgfromother=0,
    coin=0,
    playersoldierkillcoin=0,
    playermonsterkillcoin=0,
    moneyforkill=0,
    killsoldiers=0,
    report_count=0,
    surrendertimes=0,
    healthyrecall=0,
    idle_time=0,
    playeroffline=0,
    playerreconnection=0,
    skillusetimes=0,
    skillmisstimes=0,
    playerkilllittledragoncnt=0,
    playerkillbigdragoncnt=0,
    killbluebuff=0,
    killredbuff=0,
    triplekill=0,
    fourkill=0,
    fivekill=0,
    playervisiblewardcount=0,
    equiptotalbuy=0,
)


def build_match(
    match_id: str = "t0000",
    duration_s: float = 240.0,
    rates: dict[str, dict[str, float]] | None = None,
    key_events: list[KeyEvent] | None = None,
    summaries: dict[str, dict] | None = None,
    heroes: dict[str, tuple[str, str]] | None = None,
    positions: dict[str, tuple[float, float]] | None = None,
) -> MatchRecord:
    """Minimal valid ten-player match under full test control.

    ``rates`` maps player id to per-frame deltas of cumulative frame fields
    (anything missing stays flat at zero). ``summaries`` overrides summary
    stats per player; ``positions`` pins static movement positions. Defaults
    keep players far apart so no team combat triggers by accident.
    """
    rates = rates or {}
    summaries = summaries or {}
    heroes = heroes or {}
    positions = positions or {}
    pids = [f"P{i}" for i in range(10)]
    players = []
    for i, pid in enumerate(pids):
        team = Team.BLUE if i < 5 else Team.RED
        hero_id, hero_type = heroes.get(pid, (f"hero{i}", "mage"))
        fields = dict(SUMMARY_ZERO)
        fields.update(summaries.get(pid, {}))
        fields.setdefault("battleresult", BattleResult.WIN if team is Team.BLUE else BattleResult.LOSS)
        players.append(
            PlayerMatch(
                player_id=pid,
                team=team,
                hero_id=hero_id,
                hero_type=hero_type,
                lane=LANES[i % 5],
                profile=PlayerProfile(proficiency_level=10, grade=5, elo=1500.0),
                summary=MatchSummaryStats(gametime=duration_s, **fields),
            )
        )

    n_frames = math.ceil(duration_s / 20)
    frames = []
    for k in range(1, n_frames + 1):
        per_player = {}
        for pid in pids:
            r = rates.get(pid, {})
            per_player[pid] = FrameStats(
                gold=r.get("gold", 0.0) * k,
                kills=r.get("kills", 0.0) * k,
                deaths=r.get("deaths", 0.0) * k,
                assists=r.get("assists", 0.0) * k,
                damage_to_hero=r.get("damage_to_hero", 0.0) * k,
                damage_total=r.get("damage_total", 0.0) * k,
                received_damage=r.get("received_damage", 0.0) * k,
                minions_killed=r.get("minions_killed", 0.0) * k,
                playersoldierkillcoin=r.get("playersoldierkillcoin", 0.0) * k,
                playermonsterkillcoin=r.get("playermonsterkillcoin", 0.0) * k,
            )
        frames.append(TimeSeriesFrame(i=k, per_player=per_player))

    n_samples = int(duration_s // 10) + 1
    movement = []
    for j in range(n_samples):
        movement.append(
            MovementSample(
                t=float(j * 10),
                per_player={
                    pid: positions.get(pid, (0.05 + 0.09 * i, 0.05))
                    for i, pid in enumerate(pids)
                },
            )
        )

    return MatchRecord(
        match_id=match_id,
        duration_s=duration_s,
        players=tuple(players),
        key_events=tuple(key_events or []),
        frames=tuple(frames),
        movement=tuple(movement),
    )


def death_event(
    t: float,
    victim: str,
    killer: str | None = None,
    assists: tuple[str, ...] = (),
    p2h: float = 0.0,
    p2t: float = 0.0,
    h2p: float = 0.0,
    t2p: float = 0.0,
    hero_count: int = 0,
    in_turret: bool = False,
    pos: tuple[float, float] = (0.5, 0.5),
) -> KeyEvent:
    victim_team = Team.BLUE if int(victim[1]) < 5 else Team.RED
    credited = (killer,) + tuple(assists) if killer else tuple(assists)
    return KeyEvent(
        t=t,
        kind=KeyEventKind.DEATH,
        team=victim_team.opponent,
        principal=victim,
        assists=credited,
        pos=pos,
        death=DeathRecord(
            victim=victim,
            player_to_hero=p2h,
            player_to_turret=p2t,
            hero_to_player=h2p,
            turret_to_player=t2p,
            hero_count=hero_count,
            in_turret=in_turret,
        ),
    )


def objective_event(
    t: float,
    kind: KeyEventKind,
    principal: str,
    assists: tuple[str, ...] = (),
    pos: tuple[float, float] = (0.5, 0.5),
) -> KeyEvent:
    team = Team.BLUE if int(principal[1]) < 5 else Team.RED
    return KeyEvent(t=t, kind=kind, team=team, principal=principal, assists=assists, pos=pos)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory) -> tuple[Path, Path]:
    """Eight matches, one AFK plant and one feeder plant, fixed seed."""
    root = tmp_path_factory.mktemp("corpus")
    path = root / "corpus.jsonl"
    info = generate_corpus(
        8, {"normal": 0.75, "afk": 0.125, "feeder": 0.125}, seed=5, corpus_path=path
    )
    return info.corpus_path, info.truth_path


@pytest.fixture(scope="session")
def small_truth(small_corpus):
    return read_ground_truth(small_corpus[1])
