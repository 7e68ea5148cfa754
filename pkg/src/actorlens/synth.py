"""Deterministic synthetic match generator.

Produces full telemetry documents from per-player behavior scripts. Normal
players farm, skirmish, recall and occasionally trade kills; scripted
players reproduce specific disruption patterns with hard guarantees:

* ``afk(idle_span_s=S)``  - summary idle time is exactly S and the player
  sits in their base, contributing nothing, for that span.
* ``feeder(suspected_deaths=k)`` - exactly k deaths carry damage contexts
  that trip the feeding heuristics; every other death in the match looks
  ordinary. The first suicide run starts inside the first two minutes.
* ``dragon_no_show`` - the match contains a scripted dragon-pit team fight
  (minute 14 when the match is long enough) that the scripted player sits
  out, farming their lane at least 0.3 map units away for the fight's whole
  duration, with an engineered inactivity share in the low-0.5 to mid-0.6
  range and a moderate report count.
* ``base_defense_no_show`` - same shape, but the fight is a final defense
  at the player's own base while they farm a far lane.

Every draw comes from streams split off the match seed, so a given
(scripts, duration, seed) triple serializes byte-identically on every run.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .telemetry import (
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
    serialize_match,
    validate_match,
)


class BadScript(ValueError):
    """A behavior script or generator parameter is out of range."""


class Archetype(str, Enum):
    NORMAL_LANER = "normal_laner"
    NORMAL_JUNGLER = "normal_jungler"
    AFK = "afk"
    FEEDER = "feeder"
    DRAGON_NO_SHOW = "dragon_no_show"
    BASE_DEFENSE_NO_SHOW = "base_defense_no_show"


_NO_SHOW = {Archetype.DRAGON_NO_SHOW, Archetype.BASE_DEFENSE_NO_SHOW}
_NORMAL = {Archetype.NORMAL_LANER, Archetype.NORMAL_JUNGLER}

TRUE_CLASS = {
    Archetype.NORMAL_LANER: "normal",
    Archetype.NORMAL_JUNGLER: "normal",
    Archetype.AFK: "afk",
    Archetype.FEEDER: "feeder",
    Archetype.DRAGON_NO_SHOW: "dragon_no_show",
    Archetype.BASE_DEFENSE_NO_SHOW: "base_defense_no_show",
}


@dataclass(frozen=True, slots=True)
class BehaviorScript:
    archetype: Archetype
    idle_span_s: float | None = None
    suspected_deaths: int | None = None
    seed: int = 0


@dataclass(frozen=True, slots=True)
class GroundTruthRow:
    match_id: str
    player_id: str
    true_class: str


def normal_script(lane_slot: int, seed: int = 0) -> BehaviorScript:
    """Default filler: junglers on the jungle slots, laners elsewhere."""
    arch = Archetype.NORMAL_JUNGLER if lane_slot % 5 == 1 else Archetype.NORMAL_LANER
    return BehaviorScript(archetype=arch, seed=seed)


# --------------------------------------------------------------------------
# map geometry

BLUE_BASE = (0.04, 0.04)
RED_BASE = (0.96, 0.96)
DRAGON_PIT = (0.68, 0.34)
BARON_PIT = (0.34, 0.66)

SLOT_LANES: tuple[Lane, ...] = (
    Lane.TOP,
    Lane.JUNGLE,
    Lane.MID,
    Lane.BOTTOM,
    Lane.SUPPORT,
) * 2

_LANE_PATHS: dict[Lane, tuple[tuple[float, float], ...]] = {
    Lane.TOP: (BLUE_BASE, (0.07, 0.93), RED_BASE),
    Lane.MID: (BLUE_BASE, RED_BASE),
    Lane.BOTTOM: (BLUE_BASE, (0.93, 0.07), RED_BASE),
    Lane.JUNGLE: (BLUE_BASE, (0.33, 0.47), (0.47, 0.33), RED_BASE),
    Lane.SUPPORT: (BLUE_BASE, (0.93, 0.07), RED_BASE),
}

_HERO_TYPES = ("mage", "marksman", "tank", "assassin", "support", "warrior")
HERO_POOL: tuple[tuple[str, str], ...] = tuple(
    (f"h{i:02d}", _HERO_TYPES[i % len(_HERO_TYPES)]) for i in range(1, 16)
)


def lane_point(lane: Lane, s: float) -> tuple[float, float]:
    """Point at normalized arc length s along the lane path (blue end at 0)."""
    pts = _LANE_PATHS[lane]
    lengths = [
        math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
        for i in range(len(pts) - 1)
    ]
    total = sum(lengths)
    target = max(0.0, min(1.0, s)) * total
    for i, seg in enumerate(lengths):
        if target <= seg or i == len(lengths) - 1:
            (x0, y0), (x1, y1) = pts[i], pts[i + 1]
            u = min(target / seg, 1.0) if seg else 0.0
            return (x0 + (x1 - x0) * u, y0 + (y1 - y0) * u)
        target -= seg
    return pts[-1]


def _anchor(lane: Lane, team: Team) -> tuple[float, float]:
    return lane_point(lane, 0.40 if team is Team.BLUE else 0.60)


def _base(team: Team) -> tuple[float, float]:
    return BLUE_BASE if team is Team.BLUE else RED_BASE


def _clamp01(v: float) -> float:
    return max(0.0, min(1.0, v))


# --------------------------------------------------------------------------
# movement plans


@dataclass(slots=True)
class _Segment:
    t0: float
    t1: float
    p0: tuple[float, float]
    p1: tuple[float, float]
    cap: float


class _MovePlan:
    """Anchor dwell with override segments; samples add bounded wander."""

    def __init__(self, anchor: tuple[float, float]) -> None:
        self.anchor = anchor
        self.segments: list[_Segment] = []

    def hold(self, t0: float, t1: float, p: tuple[float, float], cap: float) -> None:
        self.segments.append(_Segment(t0, t1, p, p, cap))

    def move(
        self,
        t0: float,
        t1: float,
        p0: tuple[float, float],
        p1: tuple[float, float],
        cap: float,
    ) -> None:
        self.segments.append(_Segment(t0, t1, p0, p1, cap))

    def base_pos(self, t: float) -> tuple[tuple[float, float], float]:
        for seg in self.segments:
            if seg.t0 <= t < seg.t1:
                u = (t - seg.t0) / (seg.t1 - seg.t0) if seg.t1 > seg.t0 else 0.0
                return (
                    (
                        seg.p0[0] + (seg.p1[0] - seg.p0[0]) * u,
                        seg.p0[1] + (seg.p1[1] - seg.p0[1]) * u,
                    ),
                    seg.cap,
                )
        return self.anchor, 0.05


# --------------------------------------------------------------------------
# scripted team fights


@dataclass(slots=True)
class _Fight:
    start_s: int
    pos: tuple[float, float]
    kind: KeyEventKind  # the objective event raised during the fight
    plant_slot: int

    @property
    def minute(self) -> int:
        return self.start_s // 60

    @property
    def end_s(self) -> int:
        return self.start_s + 60


_FEEDER_FIRST_DEATH_S = 80
_FEEDER_CYCLE_BASE_S = 240
_FEEDER_CYCLE_PERIOD_S = 70
_FEEDER_CYCLE_DEATH_OFFSET_S = 45

# Damage-context templates. The suspected ones each trip a specific branch of
# the feeding heuristics; the draw for an ordinary death always keeps the
# dealt/received ratio above one half.
_SUSPECTED_TEMPLATES = (
    dict(p2h=0, p2t=0, h2p=0, t2p=600, hero_count=0, in_turret=True),
    dict(p2h=0, p2t=0, h2p=350, t2p=420, hero_count=2, in_turret=True),
    dict(p2h=0, p2t=0, h2p=800, t2p=0, hero_count=3, in_turret=False),
    dict(p2h=200, p2t=100, h2p=600, t2p=400, hero_count=2, in_turret=False),
)


def _feeder_death_times(duration: int) -> list[int]:
    times = [_FEEDER_FIRST_DEATH_S]
    t = _FEEDER_CYCLE_BASE_S
    while t + _FEEDER_CYCLE_DEATH_OFFSET_S <= duration - 40:
        times.append(t + _FEEDER_CYCLE_DEATH_OFFSET_S)
        t += _FEEDER_CYCLE_PERIOD_S
    return times


def feeder_capacity(duration_s: float) -> int:
    """Most suspected deaths a feeder script can plant in a match."""
    return len(_feeder_death_times(int(duration_s)))


def _normal_death_context(rng: random.Random) -> dict:
    h2p = rng.randint(200, 700)
    t2p = rng.randint(0, 300)
    p2h = math.ceil(0.5 * (h2p + t2p)) + rng.randint(50, 400)
    return dict(
        p2h=p2h,
        p2t=rng.randint(0, 200),
        h2p=h2p,
        t2p=t2p,
        hero_count=rng.randint(1, 4),
        in_turret=False,
    )


# --------------------------------------------------------------------------
# generator


def _validate_scripts(scripts: Sequence[BehaviorScript], duration: int) -> None:
    if len(scripts) != 10:
        raise BadScript(f"expected 10 scripts, got {len(scripts)}")
    for i, s in enumerate(scripts):
        if s.archetype is Archetype.AFK:
            if s.idle_span_s is None:
                raise BadScript(f"scripts[{i}]: afk requires idle_span_s")
            if not 0 <= s.idle_span_s <= duration - 180:
                raise BadScript(
                    f"scripts[{i}]: idle_span_s must be within [0, duration-180]"
                )
        elif s.idle_span_s is not None:
            raise BadScript(f"scripts[{i}]: idle_span_s only applies to afk")
        if s.archetype is Archetype.FEEDER:
            if s.suspected_deaths is None:
                raise BadScript(f"scripts[{i}]: feeder requires suspected_deaths")
            cap = feeder_capacity(duration)
            if not 0 <= s.suspected_deaths <= cap:
                raise BadScript(
                    f"scripts[{i}]: suspected_deaths must be within [0, {cap}]"
                )
        elif s.suspected_deaths is not None:
            raise BadScript(f"scripts[{i}]: suspected_deaths only applies to feeder")


def generate_match(
    scripts: Sequence[BehaviorScript],
    duration_s: float,
    seed: int,
    match_id: str | None = None,
    player_ids: Sequence[str] | None = None,
    heroes: Sequence[tuple[str, str]] | None = None,
) -> tuple[MatchRecord, list[GroundTruthRow]]:
    """Build one match from ten slot scripts (slots 0-4 blue, 5-9 red)."""
    duration = int(duration_s)
    if duration != duration_s or not 600 <= duration <= 2400:
        raise BadScript("duration_s must be an integer in [600, 2400]")
    _validate_scripts(scripts, duration)

    match_id = match_id or f"synth-{seed}"
    n20 = math.ceil(duration / 20)
    minutes = math.ceil(duration / 60)

    rng_match = random.Random(f"match:{seed}")
    rng_player = [
        random.Random(f"player:{seed}:{slot}:{scripts[slot].seed}") for slot in range(10)
    ]
    rng_team = {
        Team.BLUE: random.Random(f"team:{seed}:blue"),
        Team.RED: random.Random(f"team:{seed}:red"),
    }

    teams = [Team.BLUE if slot < 5 else Team.RED for slot in range(10)]
    lanes = list(SLOT_LANES)
    if player_ids is None:
        player_ids = [f"p{slot:02d}" for slot in range(10)]
    else:
        player_ids = list(player_ids)
        if len(player_ids) != 10 or len(set(player_ids)) != 10:
            raise BadScript("player_ids must be 10 distinct ids")
    if heroes is None:
        heroes = rng_match.sample(HERO_POOL, 10)
    else:
        heroes = list(heroes)
        if len(heroes) != 10:
            raise BadScript("heroes must list 10 (hero_id, hero_type) pairs")

    team_slots = {
        Team.BLUE: [s for s in range(10) if teams[s] is Team.BLUE],
        Team.RED: [s for s in range(10) if teams[s] is Team.RED],
    }

    # -- scripted fights --------------------------------------------------
    fights: list[_Fight] = []
    for slot, script in enumerate(scripts):
        if script.archetype is Archetype.DRAGON_NO_SHOW:
            start = min(840, duration - 360)
            if not any(f.kind is KeyEventKind.DRAGON_KILLED for f in fights):
                fights.append(_Fight(start, DRAGON_PIT, KeyEventKind.DRAGON_KILLED, slot))
        elif script.archetype is Archetype.BASE_DEFENSE_NO_SHOW:
            pos = (0.08, 0.08) if teams[slot] is Team.BLUE else (0.92, 0.92)
            if not any(f.kind is KeyEventKind.TURRET_DESTROYED for f in fights):
                fights.append(
                    _Fight(duration - 120, pos, KeyEventKind.TURRET_DESTROYED, slot)
                )
    fight_minutes = {f.minute for f in fights}
    fighter_slots = [
        s for s in range(10) if scripts[s].archetype in _NORMAL
    ]

    # -- per-team combat minutes ------------------------------------------
    combat: dict[Team, set[int]] = {}
    for team in (Team.BLUE, Team.RED):
        chosen = {m for m in range(minutes) if rng_team[team].random() < 0.22}
        combat[team] = chosen | fight_minutes
    for slot, script in enumerate(scripts):
        # keep the minute after a scripted fight quiet for each no-show's team
        if script.archetype not in _NO_SHOW:
            continue
        wanted = (
            KeyEventKind.DRAGON_KILLED
            if script.archetype is Archetype.DRAGON_NO_SHOW
            else KeyEventKind.TURRET_DESTROYED
        )
        for fight in fights:
            if fight.kind is wanted:
                combat[teams[slot]].discard(fight.minute + 1)

    # -- availability (gold-active) per interval ---------------------------
    def interval_minute(k: int) -> int:
        return (k - 1) * 20 // 60

    avail = [[True] * (n20 + 1) for _ in range(10)]  # 1-based intervals
    protected_minutes = set(fight_minutes) | {f.minute + 1 for f in fights}
    noshow_targets: dict[int, float] = {}

    for slot, script in enumerate(scripts):
        rng = rng_player[slot]
        if script.archetype is Archetype.FEEDER:
            for k in range(1, n20 + 1):
                avail[slot][k] = False
        elif script.archetype is Archetype.AFK:
            span = float(script.idle_span_s)
            for k in range(1, n20 + 1):
                midpoint = (k - 0.5) * 20
                if 120 <= midpoint < 120 + span:
                    avail[slot][k] = False
            breaks = {m for m in range(minutes) if rng.random() < 0.05}
            for k in range(1, n20 + 1):
                if interval_minute(k) in breaks:
                    avail[slot][k] = False
        elif script.archetype in _NO_SHOW:
            tau = rng.uniform(0.52, 0.63)
            noshow_targets[slot] = tau
            eligible = [
                k for k in range(1, n20 + 1) if interval_minute(k) not in protected_minutes
            ]
            n_inactive = min(round(tau * n20), len(eligible))
            for k in rng.sample(eligible, n_inactive):
                avail[slot][k] = False
        else:
            breaks = {m for m in range(minutes) if rng.random() < 0.05}
            for k in range(1, n20 + 1):
                if interval_minute(k) in breaks:
                    avail[slot][k] = False

    for slot in fighter_slots:
        for k in range(1, n20 + 1):
            if interval_minute(k) in fight_minutes:
                avail[slot][k] = True

    # every interval keeps at least three farmers per team so activeness
    # stays defined for everyone else
    for team in (Team.BLUE, Team.RED):
        slots = team_slots[team]
        normals = [s for s in slots if scripts[s].archetype in _NORMAL]
        for k in range(1, n20 + 1):
            active = sum(1 for s in slots if avail[s][k])
            for s in normals:
                if active >= 3:
                    break
                if not avail[s][k]:
                    avail[s][k] = True
                    active += 1

    # -- gold and damage schedules -----------------------------------------
    gold_rate: dict[Team, list[int]] = {}
    poke_rate: dict[Team, list[int]] = {}
    for team in (Team.BLUE, Team.RED):
        gold_rate[team] = [rng_team[team].randint(150, 350) for _ in range(minutes)]
        poke_rate[team] = [
            rng_team[team].randint(40, 120) if m in combat[team] else 0
            for m in range(minutes)
        ]

    def interval_gold(team: Team, k: int) -> int:
        minute = interval_minute(k)
        rate = gold_rate[team][minute]
        share = rate // 3
        extra = 1 if (k - 1) % 3 < rate % 3 else 0
        return share + extra

    gold_delta = [[0] * (n20 + 1) for _ in range(10)]
    soldier_delta = [[0] * (n20 + 1) for _ in range(10)]
    monster_delta = [[0] * (n20 + 1) for _ in range(10)]
    hero_dmg_delta = [[0] * (n20 + 1) for _ in range(10)]
    recv_hero_delta = [[0] * (n20 + 1) for _ in range(10)]
    recv_other_delta = [[0] * (n20 + 1) for _ in range(10)]

    for slot, script in enumerate(scripts):
        team = teams[slot]
        monster_farmer = lanes[slot] is Lane.JUNGLE and script.archetype not in _NO_SHOW
        for k in range(1, n20 + 1):
            if not avail[slot][k]:
                continue
            minute = interval_minute(k)
            in_combat = minute in combat[team]
            fights_now = in_combat and script.archetype not in _NO_SHOW
            b = interval_gold(team, k)
            if in_combat and not fights_now:
                b = int(2.5 * b)  # farming through a fight keeps the share high
            gold_delta[slot][k] = b
            if monster_farmer:
                monster_delta[slot][k] = int(0.85 * b)
            else:
                soldier_delta[slot][k] = int(0.85 * b)
            if fights_now:
                d = poke_rate[team][minute]
                hero_dmg_delta[slot][k] = d
                recv_hero_delta[slot][k] = d

    # -- movement plans -----------------------------------------------------
    plans: list[_MovePlan] = []
    recalls = [0] * 10
    feeder_deaths: dict[int, list[int]] = {}
    turret_targets: dict[int, tuple[float, float]] = {}

    for slot, script in enumerate(scripts):
        team = teams[slot]
        lane = lanes[slot]
        rng = rng_player[slot]
        anchor = _anchor(lane, team)
        plan = _MovePlan(anchor)

        if script.archetype is Archetype.FEEDER:
            plan.anchor = _base(team)
            target = lane_point(lane, 0.75 if team is Team.BLUE else 0.25)
            turret_targets[slot] = target
            times = _feeder_death_times(duration)
            feeder_deaths[slot] = times
            for t_death in times:
                run_start = t_death - 40
                plan.move(run_start, t_death, _base(team), target, 0.008)
                plan.hold(t_death, t_death + 10, target, 0.004)
        elif script.archetype is Archetype.AFK:
            span = float(script.idle_span_s)
            start, end = 120.0, 120.0 + span
            if span > 0:
                plan.move(start - 20, start, anchor, _base(team), 0.01)
                plan.hold(start, end, _base(team), 0.004)
                plan.move(end, end + 20, _base(team), anchor, 0.01)
        elif script.archetype in _NO_SHOW:
            wanted = (
                KeyEventKind.DRAGON_KILLED
                if script.archetype is Archetype.DRAGON_NO_SHOW
                else KeyEventKind.TURRET_DESTROYED
            )
            fight = next(f for f in fights if f.kind is wanted)
            ladder = (0.40, 0.30, 0.22, 0.14) if team is Team.BLUE else (0.60, 0.70, 0.78, 0.86)
            safe = next(
                (
                    lane_point(lane, s)
                    for s in ladder
                    if math.dist(lane_point(lane, s), fight.pos) >= 0.35
                ),
                _base(team),
            )
            plan.move(fight.start_s - 30, fight.start_s, anchor, safe, 0.02)
            plan.hold(fight.start_s, fight.end_s, safe, 0.008)
            plan.move(fight.end_s, fight.end_s + 30, safe, anchor, 0.02)
        if script.archetype in _NORMAL:
            n_recalls = rng.randint(2, 4)
            blocked = [(f.start_s - 120, f.end_s + 120) for f in fights]
            candidates = [
                t for t in range(180, duration - 120, 120)
                if not any(lo <= t <= hi for lo, hi in blocked)
            ]
            for t0 in sorted(rng.sample(candidates, min(n_recalls, len(candidates)))):
                plan.move(t0, t0 + 30, anchor, _base(team), 0.01)
                plan.hold(t0 + 30, t0 + 50, _base(team), 0.006)
                plan.move(t0 + 50, t0 + 80, _base(team), anchor, 0.01)
                recalls[slot] += 1
            ring = rng_match.uniform(0, 2 * math.pi)
            for fight in fights:
                offset = (
                    fight.pos[0] + 0.028 * math.cos(ring + slot),
                    fight.pos[1] + 0.028 * math.sin(ring + slot),
                )
                plan.move(fight.start_s - 30, fight.start_s, anchor, offset, 0.01)
                plan.hold(fight.start_s, fight.end_s, offset, 0.006)
                plan.move(fight.end_s, fight.end_s + 30, offset, anchor, 0.015)
        plans.append(plan)

    # -- key events ----------------------------------------------------------
    def pos_at(slot: int, t: float) -> tuple[float, float]:
        base, _cap = plans[slot].base_pos(t)
        return base

    pid = list(player_ids)
    events: list[KeyEvent] = []

    def add_death(
        t: float,
        victim_slot: int,
        killer_slot: int | None,
        assist_slots: Sequence[int],
        context: dict,
        pos: tuple[float, float],
    ) -> None:
        participants = ([] if killer_slot is None else [pid[killer_slot]]) + [
            pid[s] for s in assist_slots
        ]
        killing_team = (
            teams[killer_slot]
            if killer_slot is not None
            else teams[victim_slot].opponent
        )
        events.append(
            KeyEvent(
                t=t,
                kind=KeyEventKind.DEATH,
                team=killing_team,
                principal=pid[victim_slot],
                assists=tuple(participants),
                pos=(round(_clamp01(pos[0]), 4), round(_clamp01(pos[1]), 4)),
                death=DeathRecord(
                    victim=pid[victim_slot],
                    player_to_hero=context["p2h"],
                    player_to_turret=context["p2t"],
                    hero_to_player=context["h2p"],
                    turret_to_player=context["t2p"],
                    hero_count=context["hero_count"],
                    in_turret=context["in_turret"],
                ),
            )
        )

    def add_objective(
        t: float,
        kind: KeyEventKind,
        principal_slot: int,
        assist_slots: Sequence[int],
        pos: tuple[float, float],
    ) -> None:
        events.append(
            KeyEvent(
                t=t,
                kind=kind,
                team=teams[principal_slot],
                principal=pid[principal_slot],
                assists=tuple(pid[s] for s in assist_slots),
                pos=(round(_clamp01(pos[0]), 4), round(_clamp01(pos[1]), 4)),
            )
        )

    # scripted fights: the plant's teammates die, the enemy takes the objective
    for fight in fights:
        plant_team = teams[fight.plant_slot]
        own = [s for s in fighter_slots if teams[s] is plant_team]
        enemy = [s for s in fighter_slots if teams[s] is not plant_team]
        if own and enemy:
            victims = own[: min(3, len(own))]
            for j, victim in enumerate(victims):
                killer = enemy[j % len(enemy)]
                helpers = [s for s in enemy if s != killer][:2]
                add_death(
                    fight.start_s + 20 + 12 * j,
                    victim,
                    killer,
                    helpers,
                    _normal_death_context(rng_match),
                    fight.pos,
                )
            if fight.kind is KeyEventKind.DRAGON_KILLED:
                taker = next(
                    (s for s in enemy if lanes[s] is Lane.JUNGLE), enemy[0]
                )
                add_objective(
                    fight.start_s + 48,
                    fight.kind,
                    taker,
                    [s for s in enemy if s != taker][:2],
                    fight.pos,
                )
            else:
                for j, t_off in enumerate((25, 45)):
                    taker = enemy[j % len(enemy)]
                    add_objective(
                        fight.start_s + t_off,
                        fight.kind,
                        taker,
                        [s for s in enemy if s != taker][:2],
                        fight.pos,
                    )

    # feeder suicide runs
    for slot, times in feeder_deaths.items():
        k = scripts[slot].suspected_deaths or 0
        enemy = [s for s in fighter_slots if teams[s] is not teams[slot]]
        for j, t_death in enumerate(times):
            if j < k:
                context = dict(_SUSPECTED_TEMPLATES[j % len(_SUSPECTED_TEMPLATES)])
            else:
                context = _normal_death_context(rng_player[slot])
            killer = None
            helpers: list[int] = []
            if context["hero_count"] > 0 and enemy:
                killer = enemy[j % len(enemy)]
                helpers = [
                    s for s in enemy if s != killer
                ][: max(0, min(context["hero_count"], 3) - 1)]
            add_death(t_death, slot, killer, helpers, context, turret_targets[slot])
            interval = min(max(1, (t_death + 19) // 20), n20)
            recv_hero_delta[slot][interval] += context["h2p"]
            recv_other_delta[slot][interval] += context["t2p"]

    # ordinary kill trades during combat minutes
    trade_pool = {
        team: [s for s in fighter_slots if teams[s] is team]
        for team in (Team.BLUE, Team.RED)
    }
    n_trades = rng_match.randint(10, 18)
    for _ in range(n_trades):
        killing_team = rng_match.choice((Team.BLUE, Team.RED))
        minutes_pool = sorted(
            m for m in combat[killing_team] if m not in fight_minutes and m < minutes
        )
        killers = trade_pool[killing_team]
        victims = trade_pool[killing_team.opponent]
        if not minutes_pool or not killers or not victims:
            continue
        minute = rng_match.choice(minutes_pool)
        t = minute * 60 + rng_match.randint(5, 55)
        victim = rng_match.choice(victims)
        killer = rng_match.choice(killers)
        helpers = rng_match.sample(
            [s for s in killers if s != killer],
            min(rng_match.randint(0, 2), len(killers) - 1),
        )
        add_death(t, victim, killer, helpers, _normal_death_context(rng_match), pos_at(victim, t))

    # flavor objectives outside scripted fights
    if not any(f.kind is KeyEventKind.DRAGON_KILLED for f in fights):
        team = rng_match.choice((Team.BLUE, Team.RED))
        candidates = [s for s in trade_pool[team] if lanes[s] is Lane.JUNGLE] or trade_pool[team]
        if candidates:
            minute = rng_match.randint(7, min(12, minutes - 1))
            taker = rng_match.choice(candidates)
            helpers = rng_match.sample(
                [s for s in trade_pool[team] if s != taker],
                min(2, max(0, len(trade_pool[team]) - 1)),
            )
            add_objective(minute * 60 + rng_match.randint(5, 50), KeyEventKind.DRAGON_KILLED, taker, helpers, DRAGON_PIT)
    if minutes >= 17 and rng_match.random() < 0.35:
        team = rng_match.choice((Team.BLUE, Team.RED))
        candidates = [s for s in trade_pool[team] if lanes[s] is Lane.JUNGLE] or trade_pool[team]
        if candidates:
            minute = rng_match.randint(15, minutes - 2)
            taker = rng_match.choice(candidates)
            add_objective(minute * 60 + rng_match.randint(5, 50), KeyEventKind.BARON_KILLED, taker, [], BARON_PIT)
    for _ in range(rng_match.randint(2, 4)):
        team = rng_match.choice((Team.BLUE, Team.RED))
        if not trade_pool[team]:
            continue
        taker = rng_match.choice(trade_pool[team])
        minute = rng_match.randint(6, minutes - 1)
        if minute in fight_minutes:
            continue
        helpers = rng_match.sample(
            [s for s in trade_pool[team] if s != taker],
            min(rng_match.randint(0, 2), len(trade_pool[team]) - 1),
        )
        s_point = 0.7 if team is Team.BLUE else 0.3
        add_objective(
            minute * 60 + rng_match.randint(5, 55),
            KeyEventKind.TURRET_DESTROYED,
            taker,
            helpers,
            lane_point(lanes[taker] if lanes[taker] is not Lane.JUNGLE else Lane.MID, s_point),
        )

    events.sort(key=lambda e: e.t)

    # -- event-derived cumulative counters ------------------------------------
    kill_times: dict[str, list[float]] = {p: [] for p in pid}
    death_times: dict[str, list[float]] = {p: [] for p in pid}
    assist_times: dict[str, list[float]] = {p: [] for p in pid}
    dragon_counts = {p: 0 for p in pid}
    baron_counts = {p: 0 for p in pid}
    for e in events:
        if e.kind is KeyEventKind.DEATH:
            death_times[e.principal].append(e.t)
            if e.assists:
                kill_times[e.assists[0]].append(e.t)
                for a in e.assists[1:]:
                    assist_times[a].append(e.t)
        elif e.kind is KeyEventKind.DRAGON_KILLED:
            dragon_counts[e.principal] += 1
        elif e.kind is KeyEventKind.BARON_KILLED:
            baron_counts[e.principal] += 1

    # -- frames ----------------------------------------------------------------
    frames: list[TimeSeriesFrame] = []
    cums = {
        name: [0] * 10
        for name in ("gold", "soldier", "monster", "hero", "recv_hero", "recv_other", "total", "minions")
    }
    for k in range(1, n20 + 1):
        boundary = min(20 * k, duration)
        per_player: dict[str, FrameStats] = {}
        for slot in range(10):
            cums["gold"][slot] += gold_delta[slot][k]
            cums["soldier"][slot] += soldier_delta[slot][k]
            cums["monster"][slot] += monster_delta[slot][k]
            cums["hero"][slot] += hero_dmg_delta[slot][k]
            cums["recv_hero"][slot] += recv_hero_delta[slot][k]
            cums["recv_other"][slot] += recv_other_delta[slot][k]
            cums["total"][slot] += hero_dmg_delta[slot][k] + 2 * gold_delta[slot][k]
            cums["minions"][slot] += soldier_delta[slot][k] // 20
            p = pid[slot]
            per_player[p] = FrameStats(
                gold=cums["gold"][slot],
                kills=bisect_right(kill_times[p], boundary),
                deaths=bisect_right(death_times[p], boundary),
                assists=bisect_right(assist_times[p], boundary),
                damage_to_hero=cums["hero"][slot],
                damage_total=cums["total"][slot],
                received_damage=cums["recv_hero"][slot] + cums["recv_other"][slot],
                minions_killed=cums["minions"][slot],
                playersoldierkillcoin=cums["soldier"][slot],
                playermonsterkillcoin=cums["monster"][slot],
            )
        frames.append(TimeSeriesFrame(i=k, per_player=per_player))

    # -- movement samples --------------------------------------------------------
    samples: list[MovementSample] = []
    wander = [(0.0, 0.0)] * 10
    sample_count = duration // 10 + 1
    for idx in range(sample_count):
        t = idx * 10
        entry: dict[str, tuple[float, float]] = {}
        for slot in range(10):
            rng = rng_player[slot]
            ox, oy = wander[slot]
            ox = max(-0.05, min(0.05, ox + rng.uniform(-0.012, 0.012)))
            oy = max(-0.05, min(0.05, oy + rng.uniform(-0.012, 0.012)))
            wander[slot] = (ox, oy)
            base, cap = plans[slot].base_pos(t)
            x = _clamp01(base[0] + max(-cap, min(cap, ox)))
            y = _clamp01(base[1] + max(-cap, min(cap, oy)))
            entry[pid[slot]] = (round(x, 4), round(y, 4))
        samples.append(MovementSample(t=t, per_player=entry))

    # -- summaries -----------------------------------------------------------------
    plant_teams = [teams[s] for s, sc in enumerate(scripts) if sc.archetype not in _NORMAL]
    if plant_teams:
        losing_team = plant_teams[0]
    else:
        losing_team = rng_match.choice((Team.BLUE, Team.RED))

    players: list[PlayerMatch] = []
    truth: list[GroundTruthRow] = []
    for slot, script in enumerate(scripts):
        team = teams[slot]
        rng = rng_player[slot]
        arch = script.archetype
        lost = team is losing_team

        if arch is Archetype.AFK:
            idle = float(script.idle_span_s)
            reports = rng.randint(2, 6)
            skill_use = rng.randint(20, 80)
            tower = rng.randint(0, 300)
            equip = rng.randint(1, 4)
            offline, reconnect = 1, rng.randint(0, 1)
        elif arch is Archetype.FEEDER:
            idle = float(rng.randint(80, 115))
            reports = rng.randint(3, 7)
            skill_use = rng.randint(30, 120)
            tower = sum(
                _SUSPECTED_TEMPLATES[j % len(_SUSPECTED_TEMPLATES)]["p2t"]
                for j in range(min(script.suspected_deaths or 0, len(feeder_deaths.get(slot, []))))
            )
            equip = rng.randint(1, 3)
            offline, reconnect = 0, 0
        elif arch in _NO_SHOW:
            idle = float(rng.randint(60, 115))
            reports = rng.randint(3, 5)
            skill_use = rng.randint(60, 200)
            tower = rng.randint(100, 1200)
            equip = rng.randint(2, 5)
            offline, reconnect = 0, 0
        else:
            idle = float(rng.randint(0, 50))
            reports = rng.randint(0, 2)
            skill_use = rng.randint(150, 400)
            tower = rng.randint(300, 3500)
            equip = rng.randint(3, 7)
            offline, reconnect = 0, 0

        p = pid[slot]
        is_jungler = lanes[slot] is Lane.JUNGLE and arch not in _NO_SHOW
        summary = MatchSummaryStats(
            gametime=duration,
            kills=len(kill_times[p]),
            die=len(death_times[p]),
            assistant=len(assist_times[p]),
            dmgtotal=cums["total"][slot],
            dmgtohero=cums["hero"][slot],
            towerhurt=tower,
            rcvdmgfromall=cums["recv_hero"][slot] + cums["recv_other"][slot],
            rcvdmgfromhero=cums["recv_hero"][slot],
            rcvdmgfromother=cums["recv_other"][slot],
            coin=cums["gold"][slot],
            playersoldierkillcoin=cums["soldier"][slot],
            playermonsterkillcoin=cums["monster"][slot],
            moneyforkill=cums["gold"][slot] - cums["soldier"][slot] - cums["monster"][slot],
            killsoldiers=cums["minions"][slot],
            report_count=reports,
            battleresult=BattleResult.LOSS if lost else BattleResult.WIN,
            surrendertimes=1 if lost and rng.random() < 0.35 else 0,
            healthyrecall=recalls[slot],
            idle_time=idle,
            playeroffline=offline,
            playerreconnection=reconnect,
            skillusetimes=skill_use,
            skillmisstimes=rng.randint(5, max(6, skill_use // 4)),
            playerkilllittledragoncnt=dragon_counts[p],
            playerkillbigdragoncnt=baron_counts[p],
            killbluebuff=rng.randint(0, 4) if is_jungler else 0,
            killredbuff=rng.randint(0, 4) if is_jungler else 0,
            triplekill=1 if rng.random() < 0.08 and kill_times[p] else 0,
            fourkill=0,
            fivekill=0,
            playervisiblewardcount=rng.randint(8, 20) if lanes[slot] is Lane.SUPPORT else rng.randint(1, 6),
            equiptotalbuy=equip,
        )
        players.append(
            PlayerMatch(
                player_id=p,
                team=team,
                hero_id=heroes[slot][0],
                hero_type=heroes[slot][1],
                lane=lanes[slot],
                profile=PlayerProfile(
                    proficiency_level=rng.randint(20, 120),
                    grade=rng.randint(1, 60),
                    elo=round(rng.uniform(900, 1700), 1),
                ),
                summary=summary,
            )
        )
        truth.append(GroundTruthRow(match_id=match_id, player_id=p, true_class=TRUE_CLASS[arch]))

    record = MatchRecord(
        match_id=match_id,
        duration_s=duration,
        players=tuple(players),
        key_events=tuple(events),
        frames=tuple(frames),
        movement=tuple(samples),
    )
    violations = validate_match(record)
    if violations:  # a generator bug, not a user error
        raise RuntimeError(f"generated match violates telemetry invariants: {violations[:3]}")
    return record, truth


# --------------------------------------------------------------------------
# corpus generation

_MIX_KEYS = {
    "normal": None,
    "afk": Archetype.AFK,
    "feeder": Archetype.FEEDER,
    "dragon_no_show": Archetype.DRAGON_NO_SHOW,
    "base_defense_no_show": Archetype.BASE_DEFENSE_NO_SHOW,
}


@dataclass(frozen=True, slots=True)
class CorpusInfo:
    matches: int
    corpus_path: Path
    truth_path: Path
    plants: dict[str, int]


def _apportion(n: int, mix: dict[str, float]) -> list[str]:
    """Largest-remainder apportionment of n matches across mix keys."""
    items = sorted(mix.items())
    counts = {key: int(frac * n) for key, frac in items}
    remainders = sorted(
        ((frac * n - counts[key], key) for key, frac in items), reverse=True
    )
    short = n - sum(counts.values())
    for _, key in remainders[:short]:
        counts[key] += 1
    out: list[str] = []
    for key, count in sorted(counts.items()):
        out.extend([key] * count)
    return out


def generate_corpus(
    n: int,
    mix: dict[str, float],
    seed: int,
    corpus_path: str | Path,
    truth_path: str | Path | None = None,
) -> CorpusInfo:
    """Write n matches (and a ground-truth sidecar) to JSON Lines files."""
    if n <= 0:
        raise BadScript("n must be positive")
    for key, frac in mix.items():
        if key not in _MIX_KEYS:
            raise BadScript(f"unknown mix key {key!r}")
        if frac < 0:
            raise BadScript(f"mix[{key!r}] must be >= 0")
    if abs(sum(mix.values()) - 1.0) > 1e-6:
        raise BadScript("mix fractions must sum to 1")

    corpus_path = Path(corpus_path)
    truth_path = Path(truth_path) if truth_path else corpus_path.with_suffix(".truth.jsonl")

    assignment = _apportion(n, mix)
    rng = random.Random(f"corpus:{seed}")
    rng.shuffle(assignment)
    pool = [f"P{i:03d}" for i in range(max(18, math.ceil(n * 1.1)))]

    plants: dict[str, int] = {}
    with open(corpus_path, "w", encoding="utf-8") as corpus_fh, open(
        truth_path, "w", encoding="utf-8"
    ) as truth_fh:
        for i, key in enumerate(assignment):
            rng_m = random.Random(f"corpusmatch:{seed}:{i}")
            duration = 1200 + 60 * rng_m.randrange(5)
            pids = rng_m.sample(pool, 10)
            scripts = [normal_script(slot) for slot in range(10)]
            arch = _MIX_KEYS[key]
            if arch is not None:
                slot = rng_m.randrange(10)
                if arch is Archetype.AFK:
                    plant = BehaviorScript(arch, idle_span_s=150 + 30 * rng_m.randrange(8))
                elif arch is Archetype.FEEDER:
                    plant = BehaviorScript(arch, suspected_deaths=3 + rng_m.randrange(3))
                else:
                    plant = BehaviorScript(arch)
                scripts[slot] = plant
                plants[key] = plants.get(key, 0) + 1
            match, truth = generate_match(
                scripts,
                duration,
                seed * 1_000_003 + i,
                match_id=f"m{i:04d}",
                player_ids=pids,
            )
            corpus_fh.write(serialize_match(match) + "\n")
            for row in truth:
                truth_fh.write(
                    json.dumps(
                        {
                            "match_id": row.match_id,
                            "player_id": row.player_id,
                            "true_class": row.true_class,
                        },
                        separators=(",", ":"),
                    )
                    + "\n"
                )
    return CorpusInfo(matches=n, corpus_path=corpus_path, truth_path=truth_path, plants=plants)


def read_ground_truth(path: str | Path) -> list[GroundTruthRow]:
    rows: list[GroundTruthRow] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            rows.append(
                GroundTruthRow(
                    match_id=obj["match_id"],
                    player_id=obj["player_id"],
                    true_class=obj["true_class"],
                )
            )
    return rows
