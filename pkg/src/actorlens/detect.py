"""Rule detectors for low-effort disruption: going AFK and deliberate feeding.

Both rules are cheap per-match filters meant to run before any interactive
analysis. A player flagged here is a "low-level" case; everything that
survives is handed to the metric/labeling pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .telemetry import DeathRecord, MatchRecord


class FeederReason(str, Enum):
    TURRET_DIVING = "turret_diving"
    OVEREXTENDING = "overextending"
    DISGUISE_RESISTANCE = "disguise_resistance"


@dataclass(frozen=True, slots=True)
class DetectorConfig:
    afk_threshold_s: float = 120.0
    feeder_ratio_threshold: float = 0.4
    feeder_count_threshold: int = 3

    def __post_init__(self) -> None:
        if self.afk_threshold_s <= 0:
            raise ValueError("afk_threshold_s must be positive")
        if not 0 < self.feeder_ratio_threshold < 1:
            raise ValueError("feeder_ratio_threshold must be in (0, 1)")
        if self.feeder_count_threshold < 1:
            raise ValueError("feeder_count_threshold must be at least 1")


@dataclass(frozen=True, slots=True)
class DeathVerdict:
    death: DeathRecord
    suspected: bool
    reasons: tuple[FeederReason, ...]


@dataclass(frozen=True, slots=True)
class DetectionResult:
    match_id: str
    player_id: str
    low_level: bool
    reasons: tuple[str, ...]
    idle_time_s: float
    suspected_death_count: int


def is_afk_actor(idle_time_s: float, cfg: DetectorConfig = DetectorConfig()) -> bool:
    return idle_time_s >= cfg.afk_threshold_s


def classify_death(death: DeathRecord, cfg: DetectorConfig = DetectorConfig()) -> DeathVerdict:
    """Grade one death against the feeding heuristics.

    Three independent checks can each mark the death suspected:

    * turret diving: the victim dealt nothing and only a turret hurt them, or
      they traded with heroes while standing in turret range without ever
      damaging a hero themselves.
    * overextending: killed outside turret range by a group of three or more
      heroes without having damaged any hero.
    * disguise resistance: token damage output relative to damage taken
      (ratio of dealt to received at most the threshold). Skipped when the
      victim took no hero or turret damage at all.

    A death can carry several reasons; it still counts once toward the
    feeder total.
    """
    d = death
    reasons: list[FeederReason] = []

    if d.player_to_turret == 0 and d.player_to_hero == 0 and d.hero_to_player == 0 and d.turret_to_player != 0:
        reasons.append(FeederReason.TURRET_DIVING)
    if d.player_to_hero == 0 and d.hero_to_player != 0:
        if d.in_turret:
            reasons.append(FeederReason.TURRET_DIVING)
        elif d.hero_count >= 3:
            reasons.append(FeederReason.OVEREXTENDING)

    received = d.hero_to_player + d.turret_to_player
    if received > 0:
        dealt = d.player_to_hero + d.player_to_turret
        if dealt / received <= cfg.feeder_ratio_threshold:
            reasons.append(FeederReason.DISGUISE_RESISTANCE)

    return DeathVerdict(death=d, suspected=bool(reasons), reasons=tuple(reasons))


def player_deaths(m: MatchRecord, player_id: str) -> list[DeathRecord]:
    return [
        e.death
        for e in m.key_events
        if e.death is not None and e.death.victim == player_id
    ]


def suspected_deaths(
    m: MatchRecord, player_id: str, cfg: DetectorConfig = DetectorConfig()
) -> list[DeathVerdict]:
    """Verdicts for the player's deaths that tripped at least one check."""
    out: list[DeathVerdict] = []
    for death in player_deaths(m, player_id):
        verdict = classify_death(death, cfg)
        if verdict.suspected:
            out.append(verdict)
    return out


def is_feeder(deaths: Sequence[DeathRecord], cfg: DetectorConfig = DetectorConfig()) -> bool:
    suspected = sum(1 for d in deaths if classify_death(d, cfg).suspected)
    return suspected >= cfg.feeder_count_threshold


def filter_low_level(m: MatchRecord, cfg: DetectorConfig = DetectorConfig()) -> list[DetectionResult]:
    """Run both rules over every player of the match."""
    results: list[DetectionResult] = []
    for p in m.players:
        idle = p.summary.idle_time
        n_suspected = len(suspected_deaths(m, p.player_id, cfg))
        reasons: list[str] = []
        if is_afk_actor(idle, cfg):
            reasons.append("afk")
        if n_suspected >= cfg.feeder_count_threshold:
            reasons.append("feeder")
        results.append(
            DetectionResult(
                match_id=m.match_id,
                player_id=p.player_id,
                low_level=bool(reasons),
                reasons=tuple(reasons),
                idle_time_s=idle,
                suspected_death_count=n_suspected,
            )
        )
    return results
