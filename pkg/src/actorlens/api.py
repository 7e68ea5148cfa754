"""HTTP service for sessions, projection, progression, replay, and labeling.

All error responses carry {"code", "message", "path"}. Endpoints are
deterministic given the store state, the request, and the session seed.
"""

from __future__ import annotations

import json
import math
import threading
from typing import Sequence

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import cohort as cohort_mod
from .cohort import (
    Cohort,
    CohortMode,
    EmptySelection,
    UnknownAnchor,
    build_hero_cohort,
    build_history_cohort,
    build_lasso_cohort,
    filter_by_flow,
    progression_summary,
)
from .events import EventKind, abstract_minutes, detect_team_combats
from .metrics import METRIC_COMPONENTS, MetricsConfig, interval_activeness
from .model import (
    SOURCE_HUMAN,
    SOURCE_MODEL,
    InsufficientLabels,
    extract_features,
    hero_type_codebook,
    predict as model_predict,
    train as model_train,
)
from .projection import ProjectionConfig, TooFewPoints, embed
from .store import (
    FilterSpec,
    Member,
    Store,
    UnknownMatch,
    UnknownMember,
    UnknownSession,
    _label_json,
)

HISTOGRAM_BINS = 8


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_response(request: Request, status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "path": request.url.path},
    )


def parse_filters(raw: str) -> list[FilterSpec]:
    """Parse the filters query parameter: ``field:lo:hi`` joined by ``;``."""
    specs: list[FilterSpec] = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise ValueError(f"filter {chunk!r} is not field:lo:hi")
        field, lo, hi = parts
        specs.append(FilterSpec(field=field, lo=float(lo), hi=float(hi)))
    return specs


def _event_kind(label: str) -> EventKind:
    try:
        return EventKind.from_label(label)
    except (KeyError, ValueError) as exc:
        raise ApiError(422, "invalid_event_kind", f"unknown event kind {label!r}") from exc


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="actorlens", version="0.1.0")
    predict_locks: dict[str, threading.Lock] = {}
    predict_locks_guard = threading.Lock()

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return _error_response(request, exc.status, exc.code, exc.message)

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(request: Request, exc: StarletteHTTPException):
        return _error_response(request, exc.status_code, "http_error", str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return _error_response(request, 422, "validation_error", str(exc.errors()))

    def _session(session_id: str):
        try:
            return store.get_session(session_id)
        except UnknownSession:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")

    def _match(match_id: str):
        try:
            return store.get_match(match_id)
        except UnknownMatch:
            raise ApiError(404, "unknown_match", f"no match {match_id!r}")

    def _require_member(member: Member) -> None:
        if not store.has_member(member):
            raise ApiError(
                404, "unknown_member", f"no player-match {member[0]}/{member[1]}"
            )

    # -- service ----------------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/ingest")
    async def ingest(corpus: UploadFile = File(...)):
        payload = await corpus.read()
        try:
            text = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ApiError(422, "malformed_document", f"corpus is not UTF-8: {exc}")
        report = store.ingest_lines(text.splitlines())
        return report.as_dict()

    # -- sessions ------------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: dict):
        members = body.get("members", "all")
        seed = body.get("seed", 0)
        if not isinstance(seed, int):
            raise ApiError(422, "invalid_seed", "seed must be an integer")
        try:
            if isinstance(members, str):
                session = store.create_session(members, seed=seed)
            else:
                session = store.create_session(
                    [tuple(m) for m in members], seed=seed
                )
        except UnknownMember as exc:
            raise ApiError(404, "unknown_member", f"no player-match {exc.args[0]}")
        except ValueError as exc:
            raise ApiError(422, "invalid_selector", str(exc))
        return {"session_id": session.session_id, "members": len(session.members)}

    @app.get("/sessions/{session_id}/players")
    def session_players(session_id: str, filters: str | None = None):
        session = _session(session_id)
        if filters is not None:
            try:
                session = store.set_filters(session_id, parse_filters(filters))
            except ValueError as exc:
                raise ApiError(422, "invalid_filter", str(exc))
        rows = store.query_players(session)
        labeled = sum(1 for r in rows if r["label"] is not None)
        return {
            "session_id": session.session_id,
            "filters": [
                {"field": f.field, "lo": f.lo, "hi": f.hi} for f in session.filters
            ],
            "counts": {"focused": len(rows), "labeled": labeled},
            "members": rows,
        }

    @app.get("/sessions/{session_id}/projection")
    def session_projection(session_id: str, seed: int | None = None):
        session = _session(session_id)
        members = store.focused_members(session)
        vectors = [store.metric_vector(m) for m in members]
        cfg = ProjectionConfig(seed=session.seed if seed is None else seed)
        try:
            embedding = embed(vectors, cfg)
        except TooFewPoints as exc:
            raise ApiError(422, "too_few_points", str(exc))
        rows = []
        for member, (x, y) in zip(embedding.members, embedding.coords):
            derived = store.derived_player(member)
            rows.append(
                {
                    "match_id": member[0],
                    "player_id": member[1],
                    "x": x,
                    "y": y,
                    "metrics": dict(
                        zip(
                            METRIC_COMPONENTS,
                            derived["counts"]
                            + [derived["inactive_percentage"], derived["report_count"]],
                        )
                    ),
                    "label_status": store.label_status(member),
                    "label": _label_json(store.human_label(member)),
                    "prediction": _label_json(store.model_label(member)),
                }
            )
        return {
            "session_id": session.session_id,
            "seed": cfg.seed,
            "glyph_separation": cfg.glyph_separation,
            "members": rows,
            "normalization": {
                name: [lo, hi]
                for name, (lo, hi) in embedding.normalization.as_dict().items()
            },
        }

    @app.post("/sessions/{session_id}/lasso")
    def session_lasso(session_id: str, body: dict):
        _session(session_id)
        members = body.get("members")
        if not isinstance(members, list) or not members:
            raise ApiError(422, "empty_selection", "lasso needs a non-empty member list")
        try:
            session = store.set_lasso(session_id, [tuple(m) for m in members])
        except UnknownMember as exc:
            raise ApiError(
                422, "member_not_focused", f"{exc.args[0]} is not in the focused set"
            )
        return {"session_id": session.session_id, "lasso": [list(m) for m in session.lasso]}

    # -- progression -----------------------------------------------------------

    def _build_cohort(
        session, mode: str, anchor_match: str | None, anchor_player: str | None, limit: int
    ) -> Cohort:
        if mode == CohortMode.LASSO.value:
            try:
                return build_lasso_cohort(session.lasso)
            except EmptySelection as exc:
                raise ApiError(422, "empty_selection", str(exc))
        if mode not in (CohortMode.HISTORY.value, CohortMode.HERO.value):
            raise ApiError(422, "invalid_mode", f"unknown progression mode {mode!r}")
        if not anchor_match or not anchor_player:
            raise ApiError(
                422, "missing_anchor", "history/hero modes need anchor_match and anchor_player"
            )
        anchor = (anchor_match, anchor_player)
        _require_member(anchor)
        matches = store.matches()
        try:
            if mode == CohortMode.HISTORY.value:
                return build_history_cohort(anchor, matches, limit=limit)
            return build_hero_cohort(anchor, matches)
        except UnknownAnchor as exc:
            raise ApiError(404, "unknown_member", f"anchor {exc.args[0]} not stored")

    @app.get("/sessions/{session_id}/progression")
    def session_progression(
        session_id: str,
        mode: str = "lasso",
        anchor_match: str | None = None,
        anchor_player: str | None = None,
        limit: int = cohort_mod.DEFAULT_HISTORY_LIMIT,
        flow_t: int | None = None,
        flow_from: str | None = None,
        flow_to: str | None = None,
    ):
        session = _session(session_id)
        cohort = _build_cohort(session, mode, anchor_match, anchor_player, limit)

        flow_params = (flow_t, flow_from, flow_to)
        if any(p is not None for p in flow_params):
            if any(p is None for p in flow_params):
                raise ApiError(
                    422, "invalid_flow", "flow selection needs flow_t, flow_from and flow_to"
                )
            cohort = filter_by_flow(
                cohort,
                store.get_match,
                int(flow_t),
                _event_kind(flow_from),
                _event_kind(flow_to),
            )
        if not cohort.members:
            return {
                "session_id": session.session_id,
                "mode": mode,
                "anchor": list(cohort.anchor) if cohort.anchor else None,
                "members": [],
                "minutes": 0,
                "box": [],
                "events": [],
                "flows": [],
                "anchor_series": None,
                "anchor_priorities": None,
            }

        summary = progression_summary(cohort, store.get_match)
        anchor_series = None
        anchor_priorities = None
        if cohort.anchor is not None:
            row = store.derived_player(cohort.anchor)
            anchor_series = row["econ_diff"]
            anchor_priorities = [EventKind(v).label for v in row["priorities"]]
        return {
            "session_id": session.session_id,
            "mode": mode,
            "anchor": list(cohort.anchor) if cohort.anchor else None,
            "members": [list(m) for m in cohort.members],
            "minutes": len(summary.box),
            "box": [
                {
                    "minute": b.minute_index,
                    "min": b.minimum,
                    "q1": b.q1,
                    "median": b.median,
                    "q3": b.q3,
                    "max": b.maximum,
                }
                for b in summary.box
            ],
            "events": [
                {
                    "minute": d.minute_index,
                    "total": d.total,
                    "d": {kind.label: frac for kind, frac in sorted(d.fractions().items())},
                }
                for d in summary.flow.distributions
            ],
            "flows": [
                {
                    "minute": s.minute_index,
                    "total": s.total,
                    "f": [
                        {
                            "from": e1.label,
                            "to": e2.label,
                            "count": s.counts[(e1, e2)],
                            "fraction": frac,
                        }
                        for (e1, e2), frac in sorted(s.fractions().items())
                    ],
                }
                for s in summary.flow.steps
            ],
            "anchor_series": anchor_series,
            "anchor_priorities": anchor_priorities,
        }

    # -- match views -------------------------------------------------------------

    @app.get("/matches/{match_id}/summary")
    def match_summary(match_id: str):
        match = _match(match_id)
        rows = []
        metric_values: dict[str, list[float]] = {name: [] for name in METRIC_COMPONENTS}
        for p in match.players:
            member = (match_id, p.player_id)
            derived = store.derived_player(member)
            metrics = dict(
                zip(
                    METRIC_COMPONENTS,
                    derived["counts"]
                    + [derived["inactive_percentage"], derived["report_count"]],
                )
            )
            for name, value in metrics.items():
                metric_values[name].append(value)
            rows.append(
                {
                    "match_id": match_id,
                    "player_id": p.player_id,
                    "team": p.team.value,
                    "hero_id": p.hero_id,
                    "hero_type": p.hero_type,
                    "lane": p.lane.value,
                    "kills": p.summary.kills,
                    "die": p.summary.die,
                    "assistant": p.summary.assistant,
                    "kda": derived["kda"],
                    "coin": p.summary.coin,
                    "metrics": metrics,
                    "label_status": store.label_status(member),
                    "label": _label_json(store.human_label(member)),
                    "prediction": _label_json(store.model_label(member)),
                }
            )
        histograms = {}
        for name, values in metric_values.items():
            lo, hi = min(values), max(values)
            bins = [0] * HISTOGRAM_BINS
            for v in values:
                if hi > lo:
                    idx = min(int((v - lo) / (hi - lo) * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)
                else:
                    idx = 0
                bins[idx] += 1
            histograms[name] = {"min": lo, "max": hi, "bins": bins}
        return {
            "match_id": match_id,
            "duration_s": match.duration_s,
            "players": rows,
            "histograms": histograms,
        }

    @app.get("/matches/{match_id}/replay")
    def match_replay(match_id: str, player: str, from_s: float, to_s: float):
        match = _match(match_id)
        member = (match_id, player)
        _require_member(member)
        if not (0 <= from_s < to_s <= match.duration_s):
            raise ApiError(
                422,
                "bad_window",
                f"need 0 <= from_s < to_s <= {match.duration_s}, got [{from_s}, {to_s}]",
            )
        team = match.team_of(player)
        n_frames = len(match.frames)

        def team_gold_diff(t: float) -> float:
            idx = min(max(1, math.ceil(t / 20)), n_frames)
            frame = match.frames[idx - 1]
            own = enemy = 0.0
            for q in match.players:
                gold = frame.per_player[q.player_id].gold
                if q.team is team:
                    own += gold
                else:
                    enemy += gold
            return own - enemy

        stream = [
            {
                "t": e.t,
                "kind": e.kind.value,
                "team": e.team.value,
                "principal": e.principal,
                "y": team_gold_diff(e.t),
            }
            for e in match.key_events
        ]
        combats = [
            {
                "start_s": c.start_s,
                "end_s": c.end_s,
                "participants": sorted(c.participants),
            }
            for c in detect_team_combats(match)
        ]

        cfg = MetricsConfig()
        n20 = len(match.frames)
        player_events = []
        for q in match.players:
            minutes = abstract_minutes(match, q.player_id)
            max_poke = max((me.poke_damage for me in minutes), default=0.0)
            max_monster = max((me.monster_economy for me in minutes), default=0.0)
            max_minion = max((me.minion_economy for me in minutes), default=0.0)
            for me in minutes:
                first = 3 * me.minute_index + 1
                intervals = [k for k in range(first, first + 3) if k <= n20]
                inactive = 0
                for k in intervals:
                    score = interval_activeness(match, q.player_id, k)
                    if score is not None and score < cfg.activeness_threshold:
                        inactive += 1
                player_events.append(
                    {
                        "player_id": q.player_id,
                        "minute": me.minute_index,
                        "kinds": sorted(kind.label for kind in me.kinds_present),
                        "contributed_only": sorted(
                            kind.label for kind in me.contributed_only
                        ),
                        "poke_pct": me.poke_damage / max_poke if max_poke > 0 else 0.0,
                        "monster_pct": (
                            me.monster_economy / max_monster if max_monster > 0 else 0.0
                        ),
                        "minion_pct": (
                            me.minion_economy / max_minion if max_minion > 0 else 0.0
                        ),
                        "inactive_fraction": inactive / len(intervals) if intervals else 0.0,
                    }
                )

        economy = [
            {"player_id": q.player_id, "coin": q.summary.coin} for q in match.players
        ]
        trajectories: dict[str, list[dict]] = {q.player_id: [] for q in match.players}
        for sample in match.movement:
            if from_s <= sample.t <= to_s:
                for pid_, (x, y) in sample.per_player.items():
                    trajectories[pid_].append({"t": sample.t, "x": x, "y": y})
        return {
            "match_id": match_id,
            "player_id": player,
            "from_s": from_s,
            "to_s": to_s,
            "match_stream": stream,
            "team_combats": combats,
            "player_events": player_events,
            "economy": economy,
            "trajectories": trajectories,
        }

    @app.get("/matches/{match_id}/profile")
    def match_profile(match_id: str, player: str):
        match = _match(match_id)
        member = (match_id, player)
        _require_member(member)
        summary = match.player(player).summary
        return {
            "match_id": match_id,
            "player_id": player,
            "idle_time_s": summary.idle_time,
            "healthy_recall": summary.healthyrecall,
            "surrender_times": summary.surrendertimes,
        }

    # -- labels --------------------------------------------------------------

    @app.post("/labels")
    def post_label(body: dict):
        match_id = body.get("match_id")
        player_id = body.get("player_id")
        label = body.get("label")
        if not isinstance(match_id, str) or not isinstance(player_id, str):
            raise ApiError(422, "invalid_member", "match_id and player_id are required")
        source = body.get("source", SOURCE_HUMAN)
        if source != SOURCE_HUMAN:
            raise ApiError(
                422, "invalid_source", "only human labels may be posted; predictions come from /predict"
            )
        if label not in ("normal", "actor"):
            raise ApiError(422, "invalid_label", f"label must be normal or actor, got {label!r}")
        try:
            record = store.put_label(match_id, player_id, label, source=SOURCE_HUMAN)
        except UnknownMember as exc:
            raise ApiError(404, "unknown_member", f"no player-match {exc.args[0]}")
        return {
            "match_id": record.match_id,
            "player_id": record.player_id,
            "label": record.label,
            "source": record.source,
            "confidence": record.confidence,
            "created_at": record.created_at,
        }

    @app.get("/labels")
    def get_labels(source: str | None = None):
        if source is not None and source not in (SOURCE_HUMAN, SOURCE_MODEL):
            raise ApiError(422, "invalid_source", f"source must be human or model, got {source!r}")
        return {
            "labels": [
                {
                    "match_id": r.match_id,
                    "player_id": r.player_id,
                    "label": r.label,
                    "source": r.source,
                    "confidence": r.confidence,
                    "created_at": r.created_at,
                }
                for r in store.get_labels(source)
            ]
        }

    @app.get("/labels/export.csv")
    def export_labels():
        return PlainTextResponse(store.export_csv(), media_type="text/csv")

    # -- prediction -----------------------------------------------------------

    @app.post("/sessions/{session_id}/predict")
    def session_predict(session_id: str):
        session = _session(session_id)
        with predict_locks_guard:
            lock = predict_locks.setdefault(session.session_id, threading.Lock())
        if not lock.acquire(blocking=False):
            raise ApiError(
                429, "predict_in_progress", f"a prediction is already running for {session_id}"
            )
        try:
            codebook = hero_type_codebook(store.hero_type_vocabulary())
            human = store.get_labels(SOURCE_HUMAN)
            rows = [
                (
                    extract_features(store.get_match(r.match_id), r.player_id, codebook),
                    r.label,
                )
                for r in human
            ]
            outcome = model_train(rows, seed=session.seed)
            if isinstance(outcome, InsufficientLabels):
                raise ApiError(
                    409,
                    "insufficient_labels",
                    f"need at least {outcome.minimum} human labels per class, "
                    f"have normal={outcome.normal_count} actor={outcome.actor_count}",
                )
            targets = [
                m
                for m in store.focused_members(session)
                if store.human_label(m) is None
            ]
            features = [
                extract_features(store.get_match(mid), pid, codebook)
                for mid, pid in targets
            ]
            predictions = []
            for member, (label, confidence) in zip(
                targets, model_predict(outcome, features)
            ):
                record = store.put_label(
                    member[0],
                    member[1],
                    label,
                    source=SOURCE_MODEL,
                    confidence=confidence,
                )
                predictions.append(
                    {
                        "match_id": record.match_id,
                        "player_id": record.player_id,
                        "label": record.label,
                        "source": record.source,
                        "confidence": record.confidence,
                        "created_at": record.created_at,
                    }
                )
            trained_on = {
                "normal": sum(1 for r in human if r.label == "normal"),
                "actor": sum(1 for r in human if r.label == "actor"),
            }
            return {
                "session_id": session.session_id,
                "trained_on": trained_on,
                "predictions": predictions,
            }
        finally:
            lock.release()

    return app
