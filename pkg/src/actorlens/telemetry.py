"""Match telemetry document model.

One match is one JSON document (shipped as a single JSON line inside a
corpus file). This module owns the schema: typed records, a strict parser,
semantic validation, and canonical serialization. Everything downstream
(detection, metrics, storage, the API) consumes `MatchRecord` and never
touches raw JSON again.

Error taxonomy:

* `MalformedDocument` - the line is not JSON at all.
* `SchemaViolation`   - JSON is fine but a field is missing, has the wrong
                        type, or carries a value outside its domain.
* `InvariantViolation` - shape is fine but a semantic rule is broken
                        (cardinality, ordering, monotonicity, ranges).

All three carry `path`, the dotted location of the offending node.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Iterator

SCHEMA_TAG = "actorlens/1"

FRAME_SPACING_S = 20
MOVEMENT_SPACING_S = 10


class Team(str, Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def opponent(self) -> "Team":
        return Team.RED if self is Team.BLUE else Team.BLUE


class Lane(str, Enum):
    TOP = "top"
    MID = "mid"
    BOTTOM = "bottom"
    JUNGLE = "jungle"
    SUPPORT = "support"


class KeyEventKind(str, Enum):
    DEATH = "death"
    TURRET_DESTROYED = "turret_destroyed"
    DRAGON_KILLED = "dragon_killed"
    BARON_KILLED = "baron_killed"


class BattleResult(str, Enum):
    WIN = "win"
    LOSS = "loss"


class TelemetryError(ValueError):
    """Base for document rejections; `path` names the offending node."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.reason = message
        super().__init__(f"{path}: {message}")


class MalformedDocument(TelemetryError):
    pass


class SchemaViolation(TelemetryError):
    pass


class InvariantViolation(TelemetryError):
    pass


# Per-player aggregate stats, keyed by the flat telemetry-export names.
# `gametime` is validated equal to the match-level duration_s.
SUMMARY_NUMERIC_FIELDS = (
    "gametime",
    "kills",
    "die",
    "assistant",
    "dmgtotal",
    "dmgtohero",
    "towerhurt",
    "rcvdmgfromall",
    "rcvdmgfromhero",
    "rcvdmgfromother",
    "coin",
    "playersoldierkillcoin",
    "playermonsterkillcoin",
    "moneyforkill",
    "killsoldiers",
    "report_count",
    "surrendertimes",
    "healthyrecall",
    "idle_time",
    "playeroffline",
    "playerreconnection",
    "skillusetimes",
    "skillmisstimes",
    "playerkilllittledragoncnt",
    "playerkillbigdragoncnt",
    "killbluebuff",
    "killredbuff",
    "triplekill",
    "fourkill",
    "fivekill",
    "playervisiblewardcount",
    "equiptotalbuy",
)

FRAME_NUMERIC_FIELDS = (
    "gold",
    "kills",
    "deaths",
    "assists",
    "damage_to_hero",
    "damage_total",
    "received_damage",
    "minions_killed",
    "playersoldierkillcoin",
    "playermonsterkillcoin",
)


@dataclass(frozen=True, slots=True)
class PlayerProfile:
    proficiency_level: int
    grade: int
    elo: float


@dataclass(frozen=True, slots=True)
class MatchSummaryStats:
    gametime: float
    kills: float
    die: float
    assistant: float
    dmgtotal: float
    dmgtohero: float
    towerhurt: float
    rcvdmgfromall: float
    rcvdmgfromhero: float
    rcvdmgfromother: float
    coin: float
    playersoldierkillcoin: float
    playermonsterkillcoin: float
    moneyforkill: float
    killsoldiers: float
    report_count: float
    battleresult: BattleResult
    surrendertimes: float
    healthyrecall: float
    idle_time: float
    playeroffline: float
    playerreconnection: float
    skillusetimes: float
    skillmisstimes: float
    playerkilllittledragoncnt: float
    playerkillbigdragoncnt: float
    killbluebuff: float
    killredbuff: float
    triplekill: float
    fourkill: float
    fivekill: float
    playervisiblewardcount: float
    equiptotalbuy: float


@dataclass(frozen=True, slots=True)
class PlayerMatch:
    player_id: str
    team: Team
    hero_id: str
    hero_type: str
    lane: Lane
    profile: PlayerProfile
    summary: MatchSummaryStats


@dataclass(frozen=True, slots=True)
class DeathRecord:
    """Damage context of one death, used by the feeder rule.

    Field pairs read "<source>_to_<target>"; `victim` mirrors the enclosing
    event's principal. `hero_count` is the number of enemy heroes that dealt
    damage to the victim, so `hero_to_player == 0` forces it to zero.
    """

    victim: str
    player_to_hero: float
    player_to_turret: float
    hero_to_player: float
    turret_to_player: float
    hero_count: int
    in_turret: bool


@dataclass(frozen=True, slots=True)
class KeyEvent:
    """A discrete match event.

    For `death` events the principal is the victim; `assists[0]`, when
    present, is the enemy credited with the kill and later entries earned
    assist credit. An empty list means a non-hero source landed the blow.
    `team` is the side that caused the event.
    """

    t: float
    kind: KeyEventKind
    team: Team
    principal: str
    assists: tuple[str, ...]
    pos: tuple[float, float]
    death: DeathRecord | None = None


@dataclass(frozen=True, slots=True)
class FrameStats:
    gold: float
    kills: float
    deaths: float
    assists: float
    damage_to_hero: float
    damage_total: float
    received_damage: float
    minions_killed: float
    playersoldierkillcoin: float
    playermonsterkillcoin: float


@dataclass(frozen=True, slots=True)
class TimeSeriesFrame:
    """Cumulative per-player stats at boundary `min(20 * i, duration_s)`."""

    i: int
    per_player: dict[str, FrameStats]


@dataclass(frozen=True, slots=True)
class MovementSample:
    t: float
    per_player: dict[str, tuple[float, float]]


@dataclass(frozen=True, slots=True)
class MatchRecord:
    match_id: str
    duration_s: float
    players: tuple[PlayerMatch, ...]
    key_events: tuple[KeyEvent, ...]
    frames: tuple[TimeSeriesFrame, ...]
    movement: tuple[MovementSample, ...]

    def player(self, player_id: str) -> PlayerMatch:
        for p in self.players:
            if p.player_id == player_id:
                return p
        raise KeyError(player_id)

    def team_of(self, player_id: str) -> Team:
        return self.player(player_id).team

    def frame_count(self) -> int:
        return math.ceil(self.duration_s / FRAME_SPACING_S)

    def minute_count(self) -> int:
        return math.ceil(self.duration_s / 60)


# --------------------------------------------------------------------------
# parsing


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaViolation(path, message)


def _get(obj: dict, key: str, path: str) -> Any:
    _expect(isinstance(obj, dict), path, "expected an object")
    if key not in obj:
        raise SchemaViolation(f"{path}.{key}", "missing required field")
    return obj[key]


def _number(value: Any, path: str) -> float:
    _expect(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        path,
        "expected a number",
    )
    _expect(math.isfinite(value), path, "expected a finite number")
    return value


def _integer(value: Any, path: str) -> int:
    _expect(
        isinstance(value, int) and not isinstance(value, bool),
        path,
        "expected an integer",
    )
    return value


def _string(value: Any, path: str) -> str:
    _expect(isinstance(value, str) and value != "", path, "expected a non-empty string")
    return value


def _enum(value: Any, enum_cls: type, path: str) -> Any:
    _expect(isinstance(value, str), path, "expected a string")
    try:
        return enum_cls(value)
    except ValueError:
        allowed = "|".join(e.value for e in enum_cls)
        raise SchemaViolation(path, f"expected one of {allowed}, got {value!r}") from None


def _position(value: Any, path: str) -> tuple[float, float]:
    _expect(isinstance(value, list) and len(value) == 2, path, "expected [x, y]")
    return (_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _parse_summary(obj: Any, path: str) -> MatchSummaryStats:
    values: dict[str, Any] = {}
    for name in SUMMARY_NUMERIC_FIELDS:
        values[name] = _number(_get(obj, name, path), f"{path}.{name}")
    values["battleresult"] = _enum(
        _get(obj, "battleresult", path), BattleResult, f"{path}.battleresult"
    )
    return MatchSummaryStats(**values)


def _parse_player(obj: Any, path: str) -> PlayerMatch:
    profile_obj = _get(obj, "profile", path)
    profile = PlayerProfile(
        proficiency_level=_integer(
            _get(profile_obj, "proficiency_level", f"{path}.profile"),
            f"{path}.profile.proficiency_level",
        ),
        grade=_integer(_get(profile_obj, "grade", f"{path}.profile"), f"{path}.profile.grade"),
        elo=_number(_get(profile_obj, "elo", f"{path}.profile"), f"{path}.profile.elo"),
    )
    return PlayerMatch(
        player_id=_string(_get(obj, "player_id", path), f"{path}.player_id"),
        team=_enum(_get(obj, "team", path), Team, f"{path}.team"),
        hero_id=_string(_get(obj, "hero_id", path), f"{path}.hero_id"),
        hero_type=_string(_get(obj, "hero_type", path), f"{path}.hero_type"),
        lane=_enum(_get(obj, "lane", path), Lane, f"{path}.lane"),
        profile=profile,
        summary=_parse_summary(_get(obj, "summary", path), f"{path}.summary"),
    )


def _parse_death(obj: Any, principal: str, path: str) -> DeathRecord:
    return DeathRecord(
        victim=principal,
        player_to_hero=_number(_get(obj, "p2h", path), f"{path}.p2h"),
        player_to_turret=_number(_get(obj, "p2t", path), f"{path}.p2t"),
        hero_to_player=_number(_get(obj, "h2p", path), f"{path}.h2p"),
        turret_to_player=_number(_get(obj, "t2p", path), f"{path}.t2p"),
        hero_count=_integer(_get(obj, "hero_count", path), f"{path}.hero_count"),
        in_turret=_boolean(_get(obj, "in_turret", path), f"{path}.in_turret"),
    )


def _boolean(value: Any, path: str) -> bool:
    _expect(isinstance(value, bool), path, "expected a boolean")
    return value


def _parse_event(obj: Any, path: str) -> KeyEvent:
    kind = _enum(_get(obj, "kind", path), KeyEventKind, f"{path}.kind")
    principal = _string(_get(obj, "principal", path), f"{path}.principal")
    assists_raw = _get(obj, "assists", path)
    _expect(isinstance(assists_raw, list), f"{path}.assists", "expected a list")
    assists = tuple(
        _string(a, f"{path}.assists[{i}]") for i, a in enumerate(assists_raw)
    )
    death = None
    if kind is KeyEventKind.DEATH:
        death = _parse_death(_get(obj, "death", path), principal, f"{path}.death")
    else:
        _expect("death" not in obj, f"{path}.death", "only death events carry a death record")
    return KeyEvent(
        t=_number(_get(obj, "t", path), f"{path}.t"),
        kind=kind,
        team=_enum(_get(obj, "team", path), Team, f"{path}.team"),
        principal=principal,
        assists=assists,
        pos=_position(_get(obj, "pos", path), f"{path}.pos"),
        death=death,
    )


def _parse_frame(obj: Any, path: str) -> TimeSeriesFrame:
    per_player_obj = _get(obj, "per_player", path)
    _expect(isinstance(per_player_obj, dict), f"{path}.per_player", "expected an object")
    per_player: dict[str, FrameStats] = {}
    for pid, stats in per_player_obj.items():
        spath = f"{path}.per_player.{pid}"
        per_player[pid] = FrameStats(
            **{
                name: _number(_get(stats, name, spath), f"{spath}.{name}")
                for name in FRAME_NUMERIC_FIELDS
            }
        )
    return TimeSeriesFrame(i=_integer(_get(obj, "i", path), f"{path}.i"), per_player=per_player)


def _parse_movement(obj: Any, path: str) -> MovementSample:
    per_player_obj = _get(obj, "per_player", path)
    _expect(isinstance(per_player_obj, dict), f"{path}.per_player", "expected an object")
    per_player = {
        pid: _position(_get(entry, "pos", f"{path}.per_player.{pid}"), f"{path}.per_player.{pid}.pos")
        for pid, entry in per_player_obj.items()
    }
    return MovementSample(t=_number(_get(obj, "t", path), f"{path}.t"), per_player=per_player)


def parse_match(line: str) -> MatchRecord:
    """Parse one corpus line into a validated MatchRecord.

    Raises MalformedDocument on non-JSON input, SchemaViolation on shape or
    domain problems, and InvariantViolation (the first one found) when the
    document is well-formed but semantically inconsistent.
    """
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedDocument("$", f"not valid JSON ({exc.msg})") from None
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    tag = _get(doc, "schema", "$")
    _expect(tag == SCHEMA_TAG, "$.schema", f"expected {SCHEMA_TAG!r}, got {tag!r}")

    players_raw = _get(doc, "players", "$")
    _expect(isinstance(players_raw, list), "$.players", "expected a list")
    events_raw = _get(doc, "key_events", "$")
    _expect(isinstance(events_raw, list), "$.key_events", "expected a list")
    frames_raw = _get(doc, "frames", "$")
    _expect(isinstance(frames_raw, list), "$.frames", "expected a list")
    movement_raw = _get(doc, "movement", "$")
    _expect(isinstance(movement_raw, list), "$.movement", "expected a list")

    record = MatchRecord(
        match_id=_string(_get(doc, "match_id", "$"), "$.match_id"),
        duration_s=_number(_get(doc, "duration_s", "$"), "$.duration_s"),
        players=tuple(
            _parse_player(p, f"$.players[{i}]") for i, p in enumerate(players_raw)
        ),
        key_events=tuple(
            _parse_event(e, f"$.key_events[{i}]") for i, e in enumerate(events_raw)
        ),
        frames=tuple(
            _parse_frame(f, f"$.frames[{i}]") for i, f in enumerate(frames_raw)
        ),
        movement=tuple(
            _parse_movement(s, f"$.movement[{i}]") for i, s in enumerate(movement_raw)
        ),
    )
    violations = validate_match(record)
    if violations:
        raise InvariantViolation(violations[0].split(": ", 1)[0], violations[0].split(": ", 1)[1])
    return record


# --------------------------------------------------------------------------
# validation


def validate_match(m: MatchRecord) -> list[str]:
    """Return every broken semantic invariant as "path: description"."""
    out: list[str] = []

    if m.duration_s <= 0:
        out.append("$.duration_s: must be positive")
        return out

    if len(m.players) != 10:
        out.append(f"$.players: expected 10 players, got {len(m.players)}")
    by_team = {Team.BLUE: 0, Team.RED: 0}
    seen_ids: set[str] = set()
    ids: set[str] = set()
    for i, p in enumerate(m.players):
        by_team[p.team] += 1
        if p.player_id in seen_ids:
            out.append(f"$.players[{i}].player_id: duplicate player {p.player_id!r}")
        seen_ids.add(p.player_id)
        ids.add(p.player_id)
        path = f"$.players[{i}]"
        if p.profile.proficiency_level < 0:
            out.append(f"{path}.profile.proficiency_level: must be >= 0")
        if p.profile.grade < 0:
            out.append(f"{path}.profile.grade: must be >= 0")
        if p.profile.elo < 0:
            out.append(f"{path}.profile.elo: must be >= 0")
        s = p.summary
        for name in SUMMARY_NUMERIC_FIELDS:
            if getattr(s, name) < 0:
                out.append(f"{path}.summary.{name}: must be >= 0")
        if s.gametime != m.duration_s:
            out.append(f"{path}.summary.gametime: must equal duration_s")
        if s.idle_time > s.gametime:
            out.append(f"{path}.summary.idle_time: exceeds gametime")
        if s.rcvdmgfromall < s.rcvdmgfromhero:
            out.append(f"{path}.summary.rcvdmgfromall: below rcvdmgfromhero")
    if len(m.players) == 10 and (by_team[Team.BLUE] != 5 or by_team[Team.RED] != 5):
        out.append(
            f"$.players: expected 5 per team, got blue={by_team[Team.BLUE]} red={by_team[Team.RED]}"
        )

    prev_t = -math.inf
    for i, e in enumerate(m.key_events):
        path = f"$.key_events[{i}]"
        if e.t < prev_t:
            out.append(f"{path}.t: events not sorted by time")
        prev_t = e.t
        if not 0 <= e.t <= m.duration_s:
            out.append(f"{path}.t: outside [0, duration_s]")
        if e.principal not in ids:
            out.append(f"{path}.principal: unknown player {e.principal!r}")
        for j, a in enumerate(e.assists):
            if a not in ids:
                out.append(f"{path}.assists[{j}]: unknown player {a!r}")
        if not (0 <= e.pos[0] <= 1 and 0 <= e.pos[1] <= 1):
            out.append(f"{path}.pos: outside the unit square")
        if e.death is not None:
            d = e.death
            dpath = f"{path}.death"
            for fname in ("player_to_hero", "player_to_turret", "hero_to_player", "turret_to_player"):
                if getattr(d, fname) < 0:
                    out.append(f"{dpath}.{fname}: must be >= 0")
            if d.hero_count < 0:
                out.append(f"{dpath}.hero_count: must be >= 0")
            if d.hero_to_player == 0 and d.hero_count != 0:
                out.append(f"{dpath}.hero_count: must be 0 when h2p is 0")

    expected_frames = math.ceil(m.duration_s / FRAME_SPACING_S)
    if len(m.frames) != expected_frames:
        out.append(f"$.frames: expected {expected_frames} frames, got {len(m.frames)}")
    prev: TimeSeriesFrame | None = None
    for idx, frame in enumerate(m.frames):
        path = f"$.frames[{idx}]"
        if frame.i != idx + 1:
            out.append(f"{path}.i: expected {idx + 1}, got {frame.i}")
        if set(frame.per_player) != ids:
            out.append(f"{path}.per_player: player set mismatch")
            prev = frame
            continue
        for pid, stats in frame.per_player.items():
            for name in FRAME_NUMERIC_FIELDS:
                value = getattr(stats, name)
                if value < 0:
                    out.append(f"{path}.per_player.{pid}.{name}: must be >= 0")
                elif prev is not None and pid in prev.per_player and value < getattr(
                    prev.per_player[pid], name
                ):
                    out.append(f"{path}.per_player.{pid}.{name}: non-decreasing violated")
        prev = frame

    expected_samples = int(m.duration_s // MOVEMENT_SPACING_S) + 1
    if len(m.movement) != expected_samples:
        out.append(f"$.movement: expected {expected_samples} samples, got {len(m.movement)}")
    for idx, sample in enumerate(m.movement):
        path = f"$.movement[{idx}]"
        if sample.t != idx * MOVEMENT_SPACING_S:
            out.append(f"{path}.t: expected {idx * MOVEMENT_SPACING_S}, got {sample.t}")
        if set(sample.per_player) != ids:
            out.append(f"{path}.per_player: player set mismatch")
            continue
        for pid, (x, y) in sample.per_player.items():
            if not (0 <= x <= 1 and 0 <= y <= 1):
                out.append(f"{path}.per_player.{pid}.pos: outside the unit square")

    return out


# --------------------------------------------------------------------------
# serialization


def _summary_to_dict(s: MatchSummaryStats) -> dict[str, Any]:
    obj: dict[str, Any] = {}
    for f in fields(MatchSummaryStats):
        value = getattr(s, f.name)
        obj[f.name] = value.value if isinstance(value, Enum) else value
    return obj


def _event_to_dict(e: KeyEvent) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "t": e.t,
        "kind": e.kind.value,
        "team": e.team.value,
        "principal": e.principal,
        "assists": list(e.assists),
        "pos": [e.pos[0], e.pos[1]],
    }
    if e.death is not None:
        obj["death"] = {
            "p2h": e.death.player_to_hero,
            "p2t": e.death.player_to_turret,
            "h2p": e.death.hero_to_player,
            "t2p": e.death.turret_to_player,
            "hero_count": e.death.hero_count,
            "in_turret": e.death.in_turret,
        }
    return obj


def match_to_dict(m: MatchRecord) -> dict[str, Any]:
    return {
        "schema": SCHEMA_TAG,
        "match_id": m.match_id,
        "duration_s": m.duration_s,
        "players": [
            {
                "player_id": p.player_id,
                "team": p.team.value,
                "hero_id": p.hero_id,
                "hero_type": p.hero_type,
                "lane": p.lane.value,
                "profile": {
                    "proficiency_level": p.profile.proficiency_level,
                    "grade": p.profile.grade,
                    "elo": p.profile.elo,
                },
                "summary": _summary_to_dict(p.summary),
            }
            for p in m.players
        ],
        "key_events": [_event_to_dict(e) for e in m.key_events],
        "frames": [
            {
                "i": f.i,
                "per_player": {
                    pid: {name: getattr(stats, name) for name in FRAME_NUMERIC_FIELDS}
                    for pid, stats in f.per_player.items()
                },
            }
            for f in m.frames
        ],
        "movement": [
            {
                "t": s.t,
                "per_player": {pid: {"pos": [x, y]} for pid, (x, y) in s.per_player.items()},
            }
            for s in m.movement
        ],
    }


def serialize_match(m: MatchRecord) -> str:
    """Canonical single-line JSON; parse_match(serialize_match(m)) == m."""
    return json.dumps(match_to_dict(m), separators=(",", ":"))


def iter_corpus(path: Any) -> Iterator[tuple[int, MatchRecord | TelemetryError]]:
    """Yield (line_number, MatchRecord | error) for each non-blank line."""
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield line_no, parse_match(line)
            except TelemetryError as exc:
                yield line_no, exc
