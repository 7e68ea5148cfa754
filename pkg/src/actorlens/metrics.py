"""Per-player match metrics used for focusing and labeling.

The metric vector condenses one player-match into eleven numbers: the nine
per-minute priority-event counts, the share of 20-second intervals the
player spent contributing nothing, and the number of reports filed against
them. Economic difference series support the progression views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .events import EventKind, abstract_minutes, priority_event
from .telemetry import FRAME_SPACING_S, MatchRecord, PlayerMatch

# Component names accepted by filters, in vector order.
METRIC_COMPONENTS: tuple[str, ...] = tuple(k.label for k in EventKind) + (
    "inactive_percentage",
    "report_count",
)


@dataclass(frozen=True, slots=True)
class MetricsConfig:
    activeness_threshold: float = 0.1


@dataclass(frozen=True, slots=True)
class MetricVector:
    """Ordered metric tuple for one player-match."""

    match_id: str
    player_id: str
    counts: tuple[int, ...]
    inactive_percentage: float
    report_count: float

    def as_tuple(self) -> tuple[float, ...]:
        return self.counts + (self.inactive_percentage, self.report_count)

    def component(self, name: str) -> float:
        try:
            return self.as_tuple()[METRIC_COMPONENTS.index(name)]
        except ValueError:
            raise KeyError(f"unknown metric component {name!r}") from None

    def as_dict(self) -> dict[str, float]:
        return dict(zip(METRIC_COMPONENTS, self.as_tuple()))


def activeness_score(
    player_hero_damage: float,
    team_hero_damage: float,
    player_economy: float,
    team_economy: float,
) -> float | None:
    """Mean of the player's hero-damage and economy shares of the team total.

    A component with a zero team total is undefined and excluded; when both
    are undefined the score itself is undefined (None).
    """
    shares: list[float] = []
    if team_hero_damage > 0:
        shares.append(player_hero_damage / team_hero_damage)
    if team_economy > 0:
        shares.append(player_economy / team_economy)
    if not shares:
        return None
    return sum(shares) / len(shares)


def interval_activeness(
    m: MatchRecord, player_id: str, interval: int
) -> float | None:
    """Activeness of one 20 s interval (1-based index)."""
    team = m.team_of(player_id)
    mates = [p.player_id for p in m.players if p.team is team]

    def delta(pid: str, field: str) -> float:
        frame = m.frames[interval - 1].per_player[pid]
        prev = m.frames[interval - 2].per_player[pid] if interval >= 2 else None
        return getattr(frame, field) - (getattr(prev, field) if prev else 0.0)

    return activeness_score(
        delta(player_id, "damage_to_hero"),
        sum(delta(pid, "damage_to_hero") for pid in mates),
        delta(player_id, "gold"),
        sum(delta(pid, "gold") for pid in mates),
    )


def inactive_percentage(
    m: MatchRecord, player_id: str, cfg: MetricsConfig = MetricsConfig()
) -> float:
    """Fraction of defined 20 s intervals with activeness below threshold."""
    defined = 0
    inactive = 0
    for interval in range(1, len(m.frames) + 1):
        score = interval_activeness(m, player_id, interval)
        if score is None:
            continue
        defined += 1
        if score < cfg.activeness_threshold:
            inactive += 1
    if defined == 0:
        return 0.0
    return inactive / defined


def kda(kills: float, assists: float, deaths: float) -> float:
    return (kills + assists) / (deaths + 1)


def lane_opponent(m: MatchRecord, player_id: str) -> PlayerMatch:
    """The same-lane player on the other team.

    When the lane pairing is ambiguous (zero or several candidates), fall
    back to the player holding the same roster index on the opposing team.
    """
    p = m.player(player_id)
    candidates = [q for q in m.players if q.team is not p.team and q.lane is p.lane]
    if len(candidates) == 1:
        return candidates[0]
    own_side = [q for q in m.players if q.team is p.team]
    other_side = [q for q in m.players if q.team is not p.team]
    return other_side[own_side.index(p)]


def economic_difference_series(m: MatchRecord, player_id: str) -> list[float]:
    """Per-minute cumulative gold lead over the lane opponent."""
    opponent = lane_opponent(m, player_id)
    n_frames = len(m.frames)
    out: list[float] = []
    for minute in range(m.minute_count()):
        frame_idx = min(3 * (minute + 1), n_frames)
        frame = m.frames[frame_idx - 1]
        out.append(frame.per_player[player_id].gold - frame.per_player[opponent.player_id].gold)
    return out


def metric_vector(
    m: MatchRecord, player_id: str, cfg: MetricsConfig = MetricsConfig()
) -> MetricVector:
    counts = [0] * len(EventKind)
    for me in abstract_minutes(m, player_id):
        counts[priority_event(me)] += 1
    return MetricVector(
        match_id=m.match_id,
        player_id=player_id,
        counts=tuple(counts),
        inactive_percentage=inactive_percentage(m, player_id, cfg),
        report_count=m.player(player_id).summary.report_count,
    )
