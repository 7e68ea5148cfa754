"""Cohort construction and progression summaries.

A cohort is a set of player-matches compared side by side: a lasso selection,
one player's own recent matches, or other players on the same hero. For a
cohort we summarize, per minute, the spread of economic differences (box
statistics), the distribution of priority events, and the flow between
priority events in adjacent minutes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Sequence

from .events import EventKind, abstract_minutes, priority_event
from .metrics import economic_difference_series
from .telemetry import MatchRecord

Member = tuple[str, str]
MatchLookup = Callable[[str], MatchRecord]


class CohortMode(str, Enum):
    LASSO = "lasso"
    HISTORY = "history"
    HERO = "hero"


class EmptySelection(ValueError):
    """Lasso cohort built from an empty selection."""


class UnknownAnchor(KeyError):
    """History/hero anchor not present in the stored matches."""


DEFAULT_HISTORY_LIMIT = 20


@dataclass(frozen=True, slots=True)
class Cohort:
    mode: CohortMode
    members: tuple[Member, ...]
    anchor: Member | None = None


@dataclass(frozen=True, slots=True)
class BoxStats:
    minute_index: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float


@dataclass(frozen=True, slots=True)
class MinuteDistribution:
    """Priority-event counts among members whose match covers this minute."""

    minute_index: int
    counts: Mapping[EventKind, int]
    total: int

    def fractions(self) -> dict[EventKind, float]:
        if self.total == 0:
            return {}
        return {kind: n / self.total for kind, n in self.counts.items()}


@dataclass(frozen=True, slots=True)
class FlowStep:
    """Transition counts from minute_index to minute_index + 1.

    Restricted to members whose match covers both minutes, so the marginal
    over destination kinds equals that restricted population's distribution
    exactly, on integer counts.
    """

    minute_index: int
    counts: Mapping[tuple[EventKind, EventKind], int]
    total: int

    def fractions(self) -> dict[tuple[EventKind, EventKind], float]:
        if self.total == 0:
            return {}
        return {pair: n / self.total for pair, n in self.counts.items()}


@dataclass(frozen=True, slots=True)
class FlowSummary:
    distributions: tuple[MinuteDistribution, ...]
    steps: tuple[FlowStep, ...]


@dataclass(frozen=True, slots=True)
class ProgressionSummary:
    box: tuple[BoxStats, ...]
    flow: FlowSummary


# --------------------------------------------------------------------------
# cohort construction


def build_lasso_cohort(selection: Sequence[Member]) -> Cohort:
    if not selection:
        raise EmptySelection("lasso selection is empty")
    seen: set[Member] = set()
    members: list[Member] = []
    for member in selection:
        if member not in seen:
            seen.add(member)
            members.append(tuple(member))
    return Cohort(mode=CohortMode.LASSO, members=tuple(members))


def build_history_cohort(
    anchor: Member,
    matches: Sequence[MatchRecord],
    limit: int = DEFAULT_HISTORY_LIMIT,
) -> Cohort:
    """The anchor player's most recent matches, newest first.

    ``matches`` must be in storage (play) order, oldest first; recency is
    taken from that order.
    """
    anchor_match, anchor_player = anchor
    if not any(
        m.match_id == anchor_match
        and any(p.player_id == anchor_player for p in m.players)
        for m in matches
    ):
        raise UnknownAnchor(anchor)
    members = [
        (m.match_id, anchor_player)
        for m in reversed(matches)
        if any(p.player_id == anchor_player for p in m.players)
    ]
    return Cohort(
        mode=CohortMode.HISTORY,
        members=tuple(members[: max(1, limit)]),
        anchor=anchor,
    )


def build_hero_cohort(anchor: Member, matches: Sequence[MatchRecord]) -> Cohort:
    """Other players' matches on the anchor's hero; the anchor player excluded."""
    anchor_match, anchor_player = anchor
    hero_id: str | None = None
    for m in matches:
        if m.match_id == anchor_match:
            for p in m.players:
                if p.player_id == anchor_player:
                    hero_id = p.hero_id
    if hero_id is None:
        raise UnknownAnchor(anchor)
    members = [
        (m.match_id, p.player_id)
        for m in matches
        for p in m.players
        if p.hero_id == hero_id and p.player_id != anchor_player
    ]
    return Cohort(mode=CohortMode.HERO, members=tuple(members), anchor=anchor)


# --------------------------------------------------------------------------
# summaries


def _hinge(sorted_values: Sequence[float], position: float) -> float:
    # position is 1-based and either an integer or a half (Tukey hinges)
    lower = int(math.floor(position)) - 1
    if position == math.floor(position):
        return sorted_values[lower]
    return (sorted_values[lower] + sorted_values[lower + 1]) / 2


def tukey_box(values: Sequence[float]) -> tuple[float, float, float, float, float]:
    """(min, lower hinge, median, upper hinge, max) via median-of-halves."""
    s = sorted(values)
    n = len(s)
    if n == 0:
        raise ValueError("box statistics need at least one value")
    median_pos = (n + 1) / 2
    hinge_pos = (math.floor(median_pos) + 1) / 2
    return (
        s[0],
        _hinge(s, hinge_pos),
        _hinge(s, median_pos),
        _hinge(s, n + 1 - hinge_pos),
        s[-1],
    )


def member_priorities(m: MatchRecord, player_id: str) -> list[EventKind]:
    """The player's priority event for every minute of the match."""
    return [priority_event(me) for me in abstract_minutes(m, player_id)]


def progression_summary(cohort: Cohort, get_match: MatchLookup) -> ProgressionSummary:
    if not cohort.members:
        raise EmptySelection("cohort has no members")

    series: list[list[float]] = []
    priorities: list[list[EventKind]] = []
    for match_id, player_id in cohort.members:
        m = get_match(match_id)
        series.append(economic_difference_series(m, player_id))
        priorities.append(member_priorities(m, player_id))

    max_minutes = max(len(s) for s in series)

    box: list[BoxStats] = []
    for t in range(max_minutes):
        present = [s[t] for s in series if t < len(s)]
        lo, q1, med, q3, hi = tukey_box(present)
        box.append(
            BoxStats(minute_index=t, minimum=lo, q1=q1, median=med, q3=q3, maximum=hi)
        )

    distributions: list[MinuteDistribution] = []
    steps: list[FlowStep] = []
    for t in range(max_minutes):
        counts: dict[EventKind, int] = {}
        total = 0
        for seq in priorities:
            if t < len(seq):
                counts[seq[t]] = counts.get(seq[t], 0) + 1
                total += 1
        distributions.append(
            MinuteDistribution(minute_index=t, counts=counts, total=total)
        )
    for t in range(max_minutes - 1):
        pair_counts: dict[tuple[EventKind, EventKind], int] = {}
        total = 0
        for seq in priorities:
            if t + 1 < len(seq):
                pair = (seq[t], seq[t + 1])
                pair_counts[pair] = pair_counts.get(pair, 0) + 1
                total += 1
        steps.append(FlowStep(minute_index=t, counts=pair_counts, total=total))

    return ProgressionSummary(
        box=tuple(box),
        flow=FlowSummary(distributions=tuple(distributions), steps=tuple(steps)),
    )


def filter_by_flow(
    cohort: Cohort,
    get_match: MatchLookup,
    t: int,
    e1: EventKind,
    e2: EventKind,
) -> Cohort:
    """Members whose priority event is e1 at minute t and e2 at minute t+1."""
    if not cohort.members:
        raise EmptySelection("cohort has no members")
    kept: list[Member] = []
    for match_id, player_id in cohort.members:
        seq = member_priorities(get_match(match_id), player_id)
        if t + 1 < len(seq) and seq[t] is e1 and seq[t + 1] is e2:
            kept.append((match_id, player_id))
    return Cohort(mode=cohort.mode, members=tuple(kept), anchor=cohort.anchor)
