"""Per-player feature extraction and the label recommender.

Each player-match flattens into a fixed 43-component vector (match context,
raw performance counters, team-share ratios, and idle measures). A gradient
boosted tree ensemble trains on human labels and suggests labels for the
rest; suggestions never displace a human decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier

from .telemetry import BattleResult, MatchRecord, PlayerMatch

LABEL_NORMAL = "normal"
LABEL_ACTOR = "actor"
LABELS = (LABEL_NORMAL, LABEL_ACTOR)

SOURCE_HUMAN = "human"
SOURCE_MODEL = "model"
SOURCES = (SOURCE_HUMAN, SOURCE_MODEL)

MIN_LABELS_PER_CLASS = 3

# Component order is frozen; serialized feature rows use exactly these names.
FEATURE_NAMES: tuple[str, ...] = (
    "gametime",
    "playerproficiencylv",
    "playerherotype",
    "grade",
    "roleelo",
    "dmgtotal",
    "dmgtohero",
    "towerhurt",
    "rcvdmgfromall",
    "rcvdmgfromhero",
    "rcvdmgfromother",
    "kills",
    "die",
    "assistant",
    "coin",
    "playermonsterkillcoin",
    "moneyforkill",
    "playersoldierkillcoin",
    "killsoldiers",
    "battleresult",
    "surrendertimes",
    "healthyrecall",
    "equiptotalbuy",
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
    "idle_time",
    "dmgtohero_teams_per",
    "kills_teams_per",
    "die_teams_per",
    "assistant_teams_per",
    "coin_teams_per",
    "idle_time_per",
    "tower_dead",
)


class UnknownPlayer(KeyError):
    """Feature extraction asked for a player not in the match."""


@dataclass(frozen=True, slots=True)
class InsufficientLabels:
    """Training outcome when a class has too few human labels."""

    normal_count: int
    actor_count: int
    minimum: int = MIN_LABELS_PER_CLASS


@dataclass(frozen=True, slots=True)
class LabelRecord:
    match_id: str
    player_id: str
    label: str
    source: str
    confidence: float
    created_at: str

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be within [0, 1]")
        if self.source == SOURCE_HUMAN and self.confidence != 1.0:
            raise ValueError("human labels carry confidence 1.0")


def hero_type_codebook(hero_types: Iterable[str]) -> dict[str, int]:
    """Lexicographic ordinal code for each distinct hero type."""
    return {name: i for i, name in enumerate(sorted(set(hero_types)))}


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _team_rows(m: MatchRecord, p: PlayerMatch) -> list[PlayerMatch]:
    return [q for q in m.players if q.team is p.team]


def extract_features(
    m: MatchRecord,
    player_id: str,
    codebook: Mapping[str, int] | None = None,
) -> tuple[float, ...]:
    """The 43-component vector for one player-match, in FEATURE_NAMES order.

    When no codebook is supplied, hero types are coded within this match
    alone; pass a corpus-wide codebook for cross-match consistency.
    """
    try:
        p = m.player(player_id)
    except KeyError as exc:
        raise UnknownPlayer(player_id) from exc
    if codebook is None:
        codebook = hero_type_codebook(q.hero_type for q in m.players)
    s = p.summary
    team = [q.summary for q in _team_rows(m, p)]
    team_dmgtohero = sum(q.dmgtohero for q in team)
    team_kills = sum(q.kills for q in team)
    team_die = sum(q.die for q in team)
    team_assist = sum(q.assistant for q in team)
    team_coin = sum(q.coin for q in team)
    tower_dead = sum(
        1
        for e in m.key_events
        if e.death is not None
        and e.death.victim == player_id
        and e.death.in_turret
    )
    return (
        float(s.gametime),
        float(p.profile.proficiency_level),
        float(codebook.get(p.hero_type, len(codebook))),
        float(p.profile.grade),
        float(p.profile.elo),
        float(s.dmgtotal),
        float(s.dmgtohero),
        float(s.towerhurt),
        float(s.rcvdmgfromall),
        float(s.rcvdmgfromhero),
        float(s.rcvdmgfromother),
        float(s.kills),
        float(s.die),
        float(s.assistant),
        float(s.coin),
        float(s.playermonsterkillcoin),
        float(s.moneyforkill),
        float(s.playersoldierkillcoin),
        float(s.killsoldiers),
        1.0 if s.battleresult is BattleResult.WIN else 0.0,
        float(s.surrendertimes),
        float(s.healthyrecall),
        float(s.equiptotalbuy),
        float(s.playeroffline),
        float(s.playerreconnection),
        float(s.skillusetimes),
        float(s.skillmisstimes),
        float(s.playerkilllittledragoncnt),
        float(s.playerkillbigdragoncnt),
        float(s.killbluebuff),
        float(s.killredbuff),
        float(s.triplekill),
        float(s.fourkill),
        float(s.fivekill),
        float(s.playervisiblewardcount),
        float(s.idle_time),
        _ratio(s.dmgtohero, team_dmgtohero),
        _ratio(s.kills, team_kills),
        _ratio(s.die, team_die),
        _ratio(s.assistant, team_assist),
        _ratio(s.coin, team_coin),
        _ratio(s.idle_time, s.gametime),
        float(tower_dead),
    )


def feature_row(
    m: MatchRecord, player_id: str, codebook: Mapping[str, int] | None = None
) -> dict[str, float]:
    """Named mapping of the same vector, for serialization."""
    return dict(zip(FEATURE_NAMES, extract_features(m, player_id, codebook)))


@dataclass(slots=True)
class ClassifierHandle:
    seed: int
    classifier: GradientBoostingClassifier = field(repr=False)


def train(
    rows: Sequence[tuple[Sequence[float], str]],
    seed: int = 0,
) -> ClassifierHandle | InsufficientLabels:
    """Fit the recommender on (feature vector, label) pairs.

    Returns InsufficientLabels as a value when either class has fewer than
    MIN_LABELS_PER_CLASS examples. Class imbalance is softened with
    inverse-frequency sample weights.
    """
    normal = sum(1 for _, label in rows if label == LABEL_NORMAL)
    actor = sum(1 for _, label in rows if label == LABEL_ACTOR)
    if normal < MIN_LABELS_PER_CLASS or actor < MIN_LABELS_PER_CLASS:
        return InsufficientLabels(normal_count=normal, actor_count=actor)

    x = np.asarray([list(vec) for vec, _ in rows], dtype=float)
    y = np.asarray([1 if label == LABEL_ACTOR else 0 for _, label in rows])
    counts = {0: normal, 1: actor}
    weights = np.asarray([len(rows) / (2 * counts[cls]) for cls in y], dtype=float)

    clf = GradientBoostingClassifier(
        n_estimators=100,
        max_depth=4,
        learning_rate=0.1,
        random_state=seed,
    )
    clf.fit(x, y, sample_weight=weights)
    return ClassifierHandle(seed=seed, classifier=clf)


def predict(
    handle: ClassifierHandle, rows: Sequence[Sequence[float]]
) -> list[tuple[str, float]]:
    """(label, confidence) per row; confidence is the winning class probability."""
    if not rows:
        return []
    x = np.asarray([list(vec) for vec in rows], dtype=float)
    probs = handle.classifier.predict_proba(x)
    out: list[tuple[str, float]] = []
    for row in probs:
        idx = int(np.argmax(row))
        label = LABEL_ACTOR if handle.classifier.classes_[idx] == 1 else LABEL_NORMAL
        out.append((label, float(row[idx])))
    return out
