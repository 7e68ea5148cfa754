"""On-disk store for matches, derived caches, labels, and sessions.

Layout under the data directory (argument, else ACTORLENS_DATA_DIR, else
./actorlens_data):

    matches/<match_id>.json    raw telemetry document, one per match
    derived/<match_id>.json    cached per-player metrics and detections
    sessions/<session_id>.json session state
    labels.jsonl               append-only label audit trail
    ingest_order.json          match ids in first-ingest order

Ingest is idempotent by match id: an identical document is skipped, a
changed document replaces the old one and its caches. Human labels upsert
with the full history retained; model labels never displace human ones.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence
from urllib.parse import quote

from .detect import DetectorConfig, filter_low_level
from .cohort import member_priorities
from .metrics import METRIC_COMPONENTS, MetricVector, economic_difference_series, kda, metric_vector
from .model import (
    LABELS,
    SOURCE_HUMAN,
    SOURCE_MODEL,
    SOURCES,
    LabelRecord,
)
from .telemetry import MatchRecord, TelemetryError, parse_match, serialize_match

LABEL_STATUS_UNLABELED = 0
LABEL_STATUS_HUMAN_NORMAL = 1
LABEL_STATUS_HUMAN_ACTOR = 2

FILTER_FIELDS: frozenset[str] = frozenset(METRIC_COMPONENTS) | {"label_status"}

EXPORT_HEADER = "match_id,player_id,label,source,confidence,created_at"

Member = tuple[str, str]


class UnknownSession(KeyError):
    pass


class UnknownMember(KeyError):
    pass


class UnknownMatch(KeyError):
    pass


@dataclass(frozen=True, slots=True)
class FilterSpec:
    field: str
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.field not in FILTER_FIELDS:
            raise ValueError(f"unknown filter field {self.field!r}")
        if self.lo > self.hi:
            raise ValueError("filter range must satisfy lo <= hi")


@dataclass(slots=True)
class Session:
    session_id: str
    members: list[Member]
    filters: list[FilterSpec] = field(default_factory=list)
    lasso: list[Member] = field(default_factory=list)
    seed: int = 0


@dataclass(frozen=True, slots=True)
class IngestReport:
    matches: int
    player_matches: int
    skipped: int
    errors: tuple[tuple[int, str], ...]

    def as_dict(self) -> dict:
        return {
            "matches": self.matches,
            "player_matches": self.player_matches,
            "skipped": self.skipped,
            "errors": [{"line": line, "message": msg} for line, msg in self.errors],
        }


def _doc_hash(blob: str) -> str:
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _fname(identifier: str) -> str:
    return quote(identifier, safe="") + ".json"


class Store:
    def __init__(
        self,
        data_dir: str | Path | None = None,
        clock: Callable[[], str] | None = None,
    ) -> None:
        root = Path(
            data_dir
            or os.environ.get("ACTORLENS_DATA_DIR")
            or "actorlens_data"
        )
        self.root = root
        self._matches_dir = root / "matches"
        self._derived_dir = root / "derived"
        self._sessions_dir = root / "sessions"
        self._labels_path = root / "labels.jsonl"
        self._order_path = root / "ingest_order.json"
        for d in (self._matches_dir, self._derived_dir, self._sessions_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._clock = clock or (
            lambda: datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        )
        self._lock = threading.Lock()
        self._match_cache: dict[str, MatchRecord] = {}
        self._derived_cache: dict[str, dict] = {}
        self._order: list[str] = []
        if self._order_path.exists():
            self._order = json.loads(self._order_path.read_text("utf-8"))
        self._audit: list[LabelRecord] = []
        self._human: dict[Member, LabelRecord] = {}
        self._model: dict[Member, LabelRecord] = {}
        self._load_labels()

    # -- matches -----------------------------------------------------------

    def ingest_lines(self, lines: Iterable[str]) -> IngestReport:
        stored = 0
        skipped = 0
        errors: list[tuple[int, str]] = []
        with self._lock:
            for line_no, line in enumerate(lines, start=1):
                if not line.strip():
                    continue
                try:
                    match = parse_match(line)
                except TelemetryError as exc:
                    errors.append((line_no, str(exc)))
                    skipped += 1
                    continue
                blob = serialize_match(match)
                digest = _doc_hash(blob)
                existing = self._read_derived(match.match_id)
                if existing is not None and existing["hash"] == digest:
                    skipped += 1
                    continue
                self._write_match(match, blob, digest)
                stored += 1
        return IngestReport(
            matches=stored,
            player_matches=stored * 10,
            skipped=skipped,
            errors=tuple(errors),
        )

    def ingest(self, path: str | Path) -> IngestReport:
        with open(path, "r", encoding="utf-8") as handle:
            return self.ingest_lines(handle)

    def _write_match(self, match: MatchRecord, blob: str, digest: str) -> None:
        (self._matches_dir / _fname(match.match_id)).write_text(blob, "utf-8")
        derived = self._compute_derived(match, digest)
        (self._derived_dir / _fname(match.match_id)).write_text(
            json.dumps(derived, separators=(",", ":")), "utf-8"
        )
        self._match_cache[match.match_id] = match
        self._derived_cache[match.match_id] = derived
        if match.match_id not in self._order:
            self._order.append(match.match_id)
            self._order_path.write_text(json.dumps(self._order), "utf-8")

    def _compute_derived(self, match: MatchRecord, digest: str) -> dict:
        detections = {r.player_id: r for r in filter_low_level(match, DetectorConfig())}
        players: dict[str, dict] = {}
        for p in match.players:
            mv = metric_vector(match, p.player_id)
            det = detections[p.player_id]
            players[p.player_id] = {
                "counts": list(mv.counts),
                "inactive_percentage": mv.inactive_percentage,
                "report_count": mv.report_count,
                "priorities": [int(k) for k in member_priorities(match, p.player_id)],
                "econ_diff": economic_difference_series(match, p.player_id),
                "kills": p.summary.kills,
                "die": p.summary.die,
                "assistant": p.summary.assistant,
                "kda": kda(p.summary.kills, p.summary.assistant, p.summary.die),
                "coin": p.summary.coin,
                "hero_id": p.hero_id,
                "hero_type": p.hero_type,
                "low_level": det.low_level,
                "reasons": list(det.reasons),
                "idle_time_s": det.idle_time_s,
                "suspected_death_count": det.suspected_death_count,
            }
        return {"match_id": match.match_id, "hash": digest, "players": players}

    def _read_derived(self, match_id: str) -> dict | None:
        if match_id in self._derived_cache:
            return self._derived_cache[match_id]
        path = self._derived_dir / _fname(match_id)
        if not path.exists():
            return None
        derived = json.loads(path.read_text("utf-8"))
        self._derived_cache[match_id] = derived
        return derived

    def match_ids(self) -> list[str]:
        return list(self._order)

    def has_match(self, match_id: str) -> bool:
        return (self._matches_dir / _fname(match_id)).exists()

    def get_match(self, match_id: str) -> MatchRecord:
        if match_id in self._match_cache:
            return self._match_cache[match_id]
        path = self._matches_dir / _fname(match_id)
        if not path.exists():
            raise UnknownMatch(match_id)
        match = parse_match(path.read_text("utf-8"))
        self._match_cache[match_id] = match
        return match

    def matches(self) -> list[MatchRecord]:
        return [self.get_match(mid) for mid in self._order]

    def has_member(self, member: Member) -> bool:
        derived = self._read_derived(member[0])
        return derived is not None and member[1] in derived["players"]

    def members(self) -> list[Member]:
        out: list[Member] = []
        for mid in self._order:
            derived = self._read_derived(mid)
            if derived:
                out.extend((mid, pid) for pid in derived["players"])
        return out

    def derived_player(self, member: Member) -> dict:
        derived = self._read_derived(member[0])
        if derived is None or member[1] not in derived["players"]:
            raise UnknownMember(member)
        return derived["players"][member[1]]

    def metric_vector(self, member: Member) -> MetricVector:
        row = self.derived_player(member)
        return MetricVector(
            match_id=member[0],
            player_id=member[1],
            counts=tuple(row["counts"]),
            inactive_percentage=row["inactive_percentage"],
            report_count=row["report_count"],
        )

    def hero_type_vocabulary(self) -> list[str]:
        names: set[str] = set()
        for mid in self._order:
            derived = self._read_derived(mid)
            if derived:
                names.update(p["hero_type"] for p in derived["players"].values())
        return sorted(names)

    # -- labels --------------------------------------------------------------

    def _load_labels(self) -> None:
        if not self._labels_path.exists():
            return
        with open(self._labels_path, "r", encoding="utf-8") as handle:
            for line in handle:
                if not line.strip():
                    continue
                obj = json.loads(line)
                record = LabelRecord(
                    match_id=obj["match_id"],
                    player_id=obj["player_id"],
                    label=obj["label"],
                    source=obj["source"],
                    confidence=obj["confidence"],
                    created_at=obj["created_at"],
                )
                self._apply_label(record)

    def _apply_label(self, record: LabelRecord) -> None:
        self._audit.append(record)
        member = (record.match_id, record.player_id)
        if record.source == SOURCE_HUMAN:
            self._human[member] = record
        else:
            self._model[member] = record

    def put_label(
        self,
        match_id: str,
        player_id: str,
        label: str,
        source: str = SOURCE_HUMAN,
        confidence: float | None = None,
        created_at: str | None = None,
    ) -> LabelRecord:
        if label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        if source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}")
        member = (match_id, player_id)
        if not self.has_member(member):
            raise UnknownMember(member)
        record = LabelRecord(
            match_id=match_id,
            player_id=player_id,
            label=label,
            source=source,
            confidence=1.0 if source == SOURCE_HUMAN else float(confidence or 0.5),
            created_at=created_at or self._clock(),
        )
        with self._lock:
            with open(self._labels_path, "a", encoding="utf-8") as handle:
                handle.write(
                    json.dumps(
                        {
                            "match_id": record.match_id,
                            "player_id": record.player_id,
                            "label": record.label,
                            "source": record.source,
                            "confidence": record.confidence,
                            "created_at": record.created_at,
                        },
                        separators=(",", ":"),
                    )
                    + "\n"
                )
            self._apply_label(record)
        return record

    def human_label(self, member: Member) -> LabelRecord | None:
        return self._human.get(member)

    def model_label(self, member: Member) -> LabelRecord | None:
        return self._model.get(member)

    def effective_label(self, member: Member) -> LabelRecord | None:
        return self._human.get(member) or self._model.get(member)

    def get_labels(self, source: str | None = None) -> list[LabelRecord]:
        """Current label per member and source (audit history not included)."""
        records: list[LabelRecord] = []
        if source in (None, SOURCE_HUMAN):
            records.extend(self._human.values())
        if source in (None, SOURCE_MODEL):
            records.extend(self._model.values())
        records.sort(key=lambda r: (r.match_id, r.player_id, r.source))
        return records

    def audit(self) -> list[LabelRecord]:
        return list(self._audit)

    def label_status(self, member: Member) -> int:
        human = self._human.get(member)
        if human is None:
            return LABEL_STATUS_UNLABELED
        if human.label == "actor":
            return LABEL_STATUS_HUMAN_ACTOR
        return LABEL_STATUS_HUMAN_NORMAL

    def export_csv(self) -> str:
        """Effective label per labeled member, human decisions first in precedence."""
        out = io.StringIO()
        out.write(EXPORT_HEADER + "\n")
        members = sorted(set(self._human) | set(self._model))
        for member in members:
            record = self.effective_label(member)
            if record is None:
                continue
            confidence = (
                f"{record.confidence:.4f}".rstrip("0").rstrip(".")
                if record.confidence != 1.0
                else "1.0"
            )
            out.write(
                f"{record.match_id},{record.player_id},{record.label},"
                f"{record.source},{confidence},{record.created_at}\n"
            )
        return out.getvalue()

    # -- sessions --------------------------------------------------------------

    def create_session(
        self, members: Sequence[Member] | str, seed: int = 0
    ) -> Session:
        if isinstance(members, str):
            if members != "all":
                raise ValueError('member selector must be "all" or a member list')
            resolved = self.members()
        else:
            resolved = [tuple(m) for m in members]
            for member in resolved:
                if not self.has_member(member):
                    raise UnknownMember(member)
        with self._lock:
            session_id = f"s{len(list(self._sessions_dir.glob('*.json'))) + 1:04d}"
            session = Session(session_id=session_id, members=resolved, seed=seed)
            self._save_session(session)
        return session

    def _save_session(self, session: Session) -> None:
        payload = {
            "session_id": session.session_id,
            "members": [list(m) for m in session.members],
            "filters": [
                {"field": f.field, "lo": f.lo, "hi": f.hi} for f in session.filters
            ],
            "lasso": [list(m) for m in session.lasso],
            "seed": session.seed,
        }
        (self._sessions_dir / _fname(session.session_id)).write_text(
            json.dumps(payload, separators=(",", ":")), "utf-8"
        )

    def get_session(self, session_id: str) -> Session:
        path = self._sessions_dir / _fname(session_id)
        if not path.exists():
            raise UnknownSession(session_id)
        obj = json.loads(path.read_text("utf-8"))
        return Session(
            session_id=obj["session_id"],
            members=[tuple(m) for m in obj["members"]],
            filters=[
                FilterSpec(field=f["field"], lo=f["lo"], hi=f["hi"])
                for f in obj["filters"]
            ],
            lasso=[tuple(m) for m in obj["lasso"]],
            seed=obj["seed"],
        )

    def set_filters(self, session_id: str, filters: Sequence[FilterSpec]) -> Session:
        session = self.get_session(session_id)
        session.filters = list(filters)
        kept = set(self.focused_members(session))
        session.lasso = [m for m in session.lasso if m in kept]
        with self._lock:
            self._save_session(session)
        return session

    def set_lasso(self, session_id: str, members: Sequence[Member]) -> Session:
        session = self.get_session(session_id)
        focused = set(self.focused_members(session))
        chosen = [tuple(m) for m in members]
        for member in chosen:
            if member not in focused:
                raise UnknownMember(member)
        session.lasso = chosen
        with self._lock:
            self._save_session(session)
        return session

    # -- queries --------------------------------------------------------------

    def _filter_value(self, member: Member, field_name: str) -> float:
        if field_name == "label_status":
            return float(self.label_status(member))
        row = self.derived_player(member)
        if field_name == "inactive_percentage":
            return float(row["inactive_percentage"])
        if field_name == "report_count":
            return float(row["report_count"])
        rank = METRIC_COMPONENTS.index(field_name)
        return float(row["counts"][rank])

    def _passes(self, member: Member, filters: Sequence[FilterSpec]) -> bool:
        return all(f.lo <= self._filter_value(member, f.field) <= f.hi for f in filters)

    def focused_members(self, session: Session) -> list[Member]:
        members = sorted(set(session.members))
        return [m for m in members if self._passes(m, session.filters)]

    def query_players(self, session: Session) -> list[dict]:
        rows: list[dict] = []
        for member in self.focused_members(session):
            derived = self.derived_player(member)
            human = self.human_label(member)
            model = self.model_label(member)
            rows.append(
                {
                    "match_id": member[0],
                    "player_id": member[1],
                    "metrics": dict(
                        zip(
                            METRIC_COMPONENTS,
                            derived["counts"]
                            + [derived["inactive_percentage"], derived["report_count"]],
                        )
                    ),
                    "label_status": self.label_status(member),
                    "label": _label_json(human),
                    "prediction": _label_json(model),
                }
            )
        return rows


def _label_json(record: LabelRecord | None) -> dict | None:
    if record is None:
        return None
    return {
        "label": record.label,
        "source": record.source,
        "confidence": record.confidence,
        "created_at": record.created_at,
    }
