"""Minute-level event abstraction and team-combat detection.

Raw telemetry is too fine-grained to read; this module buckets each
player's activity into minutes, assigns every minute a set of event kinds,
and picks the single most salient kind per minute via a fixed priority
ranking. It also finds team-combat windows from movement proximity plus
hero-damage exchange.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .telemetry import (
    FRAME_SPACING_S,
    MOVEMENT_SPACING_S,
    KeyEvent,
    KeyEventKind,
    MatchRecord,
    Team,
)


class EventKind(IntEnum):
    """Per-minute event kinds; the integer value is the priority rank.

    Lower rank wins when several kinds share a minute.
    """

    TURRET_DESTRUCTION = 0
    DRAGON_KILLING = 1
    HERO_KILLING = 2
    DEATH = 3
    ASSIST = 4
    POKE = 5
    MONSTER_KILLING = 6
    MINION_KILLING = 7
    INACTION = 8

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "EventKind":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown event kind {label!r}") from None


@dataclass(frozen=True, slots=True)
class MinuteEvents:
    """One player-minute: which kinds happened and with what magnitude.

    `contributed_only` marks objective kinds where the player damaged the
    objective but never landed the final blow that minute. `poke_damage`,
    `monster_economy` and `minion_economy` carry the minute's deltas so
    views can scale marks without re-reading frames.
    """

    minute_index: int
    kinds_present: frozenset[EventKind]
    contributed_only: frozenset[EventKind]
    poke_damage: float
    monster_economy: float
    minion_economy: float


@dataclass(frozen=True, slots=True)
class TeamCombat:
    """A sustained multi-player engagement over [start_s, end_s)."""

    start_s: float
    end_s: float
    participants: frozenset[str]


# Team-combat rule constants: proximity radius in map units, one-sample gap
# tolerance, and the minimum merged span in seconds.
COMBAT_RADIUS = 0.12
COMBAT_GAP_SAMPLES = 1
COMBAT_MIN_SPAN_S = 10.0

_OBJECTIVE_KIND = {
    KeyEventKind.TURRET_DESTROYED: EventKind.TURRET_DESTRUCTION,
    KeyEventKind.DRAGON_KILLED: EventKind.DRAGON_KILLING,
    KeyEventKind.BARON_KILLED: EventKind.DRAGON_KILLING,
}


def _minute_of(t: float, minute_count: int) -> int:
    return min(int(t // 60), minute_count - 1)


def _frame_value(m: MatchRecord, frame_idx: int, player_id: str, field: str) -> float:
    # frame_idx is 1-based; 0 is the implicit all-zero baseline
    if frame_idx <= 0:
        return 0.0
    frame = m.frames[min(frame_idx, len(m.frames)) - 1]
    return getattr(frame.per_player[player_id], field)


def minute_delta(m: MatchRecord, player_id: str, minute: int, field: str) -> float:
    """Delta of a cumulative frame field over one minute."""
    start = 3 * minute
    end = 3 * (minute + 1)
    return _frame_value(m, end, player_id, field) - _frame_value(m, start, player_id, field)


def abstract_minutes(m: MatchRecord, player_id: str) -> list[MinuteEvents]:
    """Bucket one player's match into per-minute event summaries."""
    minute_count = m.minute_count()
    kinds: list[set[EventKind]] = [set() for _ in range(minute_count)]
    finals: list[set[EventKind]] = [set() for _ in range(minute_count)]
    contribs: list[set[EventKind]] = [set() for _ in range(minute_count)]

    for event in m.key_events:
        minute = _minute_of(event.t, minute_count)
        if event.kind is KeyEventKind.DEATH:
            if event.principal == player_id:
                kinds[minute].add(EventKind.DEATH)
            if event.assists:
                if event.assists[0] == player_id:
                    kinds[minute].add(EventKind.HERO_KILLING)
                elif player_id in event.assists[1:]:
                    kinds[minute].add(EventKind.ASSIST)
        else:
            kind = _OBJECTIVE_KIND[event.kind]
            if event.principal == player_id:
                kinds[minute].add(kind)
                finals[minute].add(kind)
            elif player_id in event.assists:
                kinds[minute].add(kind)
                contribs[minute].add(kind)

    out: list[MinuteEvents] = []
    for minute in range(minute_count):
        poke = minute_delta(m, player_id, minute, "damage_to_hero")
        monster = minute_delta(m, player_id, minute, "playermonsterkillcoin")
        minion = minute_delta(m, player_id, minute, "playersoldierkillcoin")
        present = set(kinds[minute])
        if poke > 0:
            present.add(EventKind.POKE)
        if monster > 0:
            present.add(EventKind.MONSTER_KILLING)
        if minion > 0:
            present.add(EventKind.MINION_KILLING)
        if not present:
            present.add(EventKind.INACTION)
        out.append(
            MinuteEvents(
                minute_index=minute,
                kinds_present=frozenset(present),
                contributed_only=frozenset(contribs[minute] - finals[minute]),
                poke_damage=poke,
                monster_economy=monster,
                minion_economy=minion,
            )
        )
    return out


def priority_event(me: MinuteEvents) -> EventKind:
    """The minute's single most salient kind (lowest rank wins)."""
    return min(me.kinds_present)


def _trim_group(positions: dict[str, tuple[float, float]]) -> set[str]:
    """Largest stable subset where every member is near the group centroid.

    Starts from everyone and repeatedly drops members farther than
    COMBAT_RADIUS from the current centroid; stops at a fixed point or when
    too few players remain to form two pairs.
    """
    group = set(positions)
    while len(group) >= 4:
        cx = sum(positions[p][0] for p in group) / len(group)
        cy = sum(positions[p][1] for p in group) / len(group)
        far = {
            p
            for p in group
            if math.hypot(positions[p][0] - cx, positions[p][1] - cy) > COMBAT_RADIUS
        }
        if not far:
            return group
        group -= far
    return set()


def detect_team_combats(m: MatchRecord) -> list[TeamCombat]:
    """Find engagement windows: spatial clustering plus damage exchange.

    A movement sample qualifies when at least two players per team sit
    within COMBAT_RADIUS of the clustered group's centroid and the group
    dealt hero damage during the 20 s frame covering the sample. Runs of
    qualifying samples merge across a single-sample gap.
    """
    teams = {p.player_id: p.team for p in m.players}
    n_frames = len(m.frames)

    qualifying: list[tuple[float, set[str]] | None] = []
    for sample in m.movement:
        group = _trim_group(sample.per_player)
        if group:
            blue = sum(1 for p in group if teams[p] is Team.BLUE)
            red = len(group) - blue
            if blue >= 2 and red >= 2:
                frame_idx = min(int(sample.t // FRAME_SPACING_S) + 1, n_frames)
                damage = sum(
                    _frame_value(m, frame_idx, p, "damage_to_hero")
                    - _frame_value(m, frame_idx - 1, p, "damage_to_hero")
                    for p in group
                )
                if damage > 0:
                    qualifying.append((sample.t, group))
                    continue
        qualifying.append(None)

    combats: list[TeamCombat] = []
    run: list[tuple[float, set[str]]] = []
    gap = 0
    for entry in qualifying + [None] * (COMBAT_GAP_SAMPLES + 1):
        if entry is not None:
            run.append(entry)
            gap = 0
            continue
        if not run:
            continue
        gap += 1
        if gap <= COMBAT_GAP_SAMPLES:
            continue
        start = run[0][0]
        end = run[-1][0] + MOVEMENT_SPACING_S
        if end - start >= COMBAT_MIN_SPAN_S:
            participants: set[str] = set()
            for _, group in run:
                participants |= group
            combats.append(TeamCombat(start_s=start, end_s=end, participants=frozenset(participants)))
        run = []
        gap = 0
    return combats
