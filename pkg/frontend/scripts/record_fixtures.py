#!/usr/bin/env python3
"""Record live API exchanges for the UI contract tests.

Each walk runs against a fresh store populated from the same deterministic
corpus, mirrors the request sequence the client state container performs,
and writes one fixture file of ordered exchanges. Re-run after changing the
service or the walks:

    python3 scripts/record_fixtures.py
"""
from __future__ import annotations

import json
import os
import shutil
import signal
import subprocess
import sys
import tempfile
import time
import urllib.error
import urllib.parse
import urllib.request
from pathlib import Path

PORT = 8412
BASE = f"http://127.0.0.1:{PORT}"
HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"

CORPUS_ARGS = ["--matches", "8", "--seed", "5", "--mix",
               "normal=0.75,afk=0.125,feeder=0.125"]
SESSION_SEED = 2

EVENT_KINDS = [
    "turret_destruction", "dragon_killing", "hero_killing", "death",
    "assist", "poke", "monster_killing", "minion_killing", "inaction",
]


class Recorder:
    def __init__(self) -> None:
        self.exchanges: list[dict] = []

    def call(self, name: str, method: str, path: str, body=None,
             expect: int | None = None) -> dict:
        url = BASE + path
        data = None
        headers = {}
        if body is not None:
            data = json.dumps(body).encode()
            headers["content-type"] = "application/json"
        req = urllib.request.Request(url, data=data, headers=headers, method=method)
        try:
            with urllib.request.urlopen(req) as res:
                status = res.status
                payload = json.loads(res.read().decode())
        except urllib.error.HTTPError as err:
            status = err.code
            payload = json.loads(err.read().decode())
        if expect is not None and status != expect:
            raise SystemExit(f"{name}: expected {expect}, got {status}: {payload}")
        self.exchanges.append({
            "name": name,
            "method": method,
            "path": path,
            "body": body,
            "status": status,
            "response": payload,
        })
        return payload

    def write(self, filename: str) -> None:
        out = FIXTURES / filename
        out.write_text(json.dumps(self.exchanges, indent=1, sort_keys=True) + "\n")
        print(f"wrote {out} ({len(self.exchanges)} exchanges)")


def boot_server(tmp: Path) -> subprocess.Popen:
    corpus = tmp / "corpus.jsonl"
    data = tmp / "data"
    subprocess.run(
        [sys.executable, "-m", "actorlens.cli", "synth", *CORPUS_ARGS,
         "--out", str(corpus)],
        check=True, capture_output=True,
    )
    subprocess.run(
        [sys.executable, "-m", "actorlens.cli", "ingest", "--in", str(corpus),
         "--data-dir", str(data)],
        check=True, capture_output=True,
    )
    proc = subprocess.Popen(
        [sys.executable, "-m", "actorlens.cli", "serve", "--port", str(PORT),
         "--data-dir", str(data)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    for _ in range(100):
        try:
            with urllib.request.urlopen(f"{BASE}/health", timeout=1):
                return proc
        except OSError:
            time.sleep(0.1)
    proc.send_signal(signal.SIGTERM)
    raise SystemExit("server did not come up")


def stop_server(proc: subprocess.Popen) -> None:
    proc.send_signal(signal.SIGTERM)
    proc.wait(timeout=10)


def fresh_session(rec: Recorder) -> str:
    created = rec.call("create_session", "POST", "/sessions",
                       {"members": "all", "seed": SESSION_SEED}, expect=200)
    players = rec.call("players_initial", "GET",
                       f"/sessions/{created['session_id']}/players", expect=200)
    rec.call("projection_initial", "GET",
             f"/sessions/{created['session_id']}/projection", expect=200)
    assert players["counts"]["focused"] == 80, players["counts"]
    return created["session_id"]


def find_plants(tmp: Path) -> tuple[list[str], list[str]]:
    truth = tmp / "corpus.truth.jsonl"
    afk = feeder = None
    for line in truth.read_text().splitlines():
        row = json.loads(line)
        if row["true_class"] == "afk" and afk is None:
            afk = [row["match_id"], row["player_id"]]
        if row["true_class"] == "feeder" and feeder is None:
            feeder = [row["match_id"], row["player_id"]]
    assert afk and feeder, "corpus missing plants"
    return afk, feeder


def derive_lasso(projection: dict, target: list[str]) -> list[list[str]]:
    """All members inside a data-space rectangle grown around the target.

    The rectangle keeps a clear margin between the chosen members' bounding
    box and every outside member, so the client-side polygon test has an
    unambiguous boundary.
    """
    rows = projection["members"]
    coords = {(r["match_id"], r["player_id"]): (r["x"], r["y"]) for r in rows}
    cx, cy = coords[tuple(target)]
    half = 0.75
    while True:
        inside = [
            key for key, (x, y) in coords.items()
            if abs(x - cx) <= half and abs(y - cy) <= half
        ]
        if len(inside) >= 4:
            xs = [coords[k][0] for k in inside]
            ys = [coords[k][1] for k in inside]
            x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
            gap = min(
                (
                    max(x0 - x, x - x1, y0 - y, y - y1, 0.0)
                    for key, (x, y) in coords.items()
                    if key not in set(inside)
                ),
                default=1.0,
            )
            if gap >= 0.05:
                return [list(k) for k in sorted(inside)]
        half += 0.25


def pick_flow(progression: dict) -> tuple[dict, dict]:
    """A realized flow that strictly narrows the cohort, plus an unrealized one."""
    size = len(progression["members"])
    narrowing = None
    for step in progression["flows"]:
        for edge in step["f"]:
            if 0 < edge["count"] < size:
                narrowing = {"t": step["minute"], "from": edge["from"],
                             "to": edge["to"], "count": edge["count"]}
                break
        if narrowing:
            break
    assert narrowing, "no narrowing flow in cohort"
    first = progression["flows"][0]
    realized = {(e["from"], e["to"]) for e in first["f"]}
    empty = None
    for a in EVENT_KINDS:
        for b in EVENT_KINDS:
            if (a, b) not in realized:
                empty = {"t": first["minute"], "from": a, "to": b}
                break
        if empty:
            break
    assert empty, "every pair realized at the first step"
    return narrowing, empty


def flow_query(sid: str, flow: dict) -> str:
    return (f"/sessions/{sid}/progression?mode=lasso"
            f"&flow_t={flow['t']}&flow_from={flow['from']}&flow_to={flow['to']}")


def replay_path(mid: str, pid: str, lo, hi) -> str:
    return f"/matches/{mid}/replay?player={pid}&from_s={lo}&to_s={hi}"


def walk_browse(tmp: Path, meta: dict) -> None:
    rec = Recorder()
    sid = fresh_session(rec)
    afk, feeder = find_plants(tmp)
    projection = rec.exchanges[-1]["response"]
    lasso = derive_lasso(projection, feeder)
    rec.call("lasso", "POST", f"/sessions/{sid}/lasso", {"members": lasso},
             expect=200)
    progression = rec.call("progression_lasso", "GET",
                           f"/sessions/{sid}/progression?mode=lasso", expect=200)
    narrowing, empty = pick_flow(progression)
    narrowed = rec.call("progression_flow", "GET", flow_query(sid, narrowing),
                        expect=200)
    assert 0 < len(narrowed["members"]) < len(lasso) + 1
    emptied = rec.call("progression_flow_empty", "GET", flow_query(sid, empty),
                       expect=200)
    assert emptied["members"] == []
    summary = rec.call("summary", "GET", f"/matches/{feeder[0]}/summary",
                       expect=200)
    duration = summary["duration_s"]
    rec.call("replay_full", "GET",
             replay_path(feeder[0], feeder[1], 0, duration), expect=200)
    rec.call("progression_history", "GET",
             f"/sessions/{sid}/progression?mode=history"
             f"&anchor_match={feeder[0]}&anchor_player={feeder[1]}", expect=200)
    rec.call("progression_hero", "GET",
             f"/sessions/{sid}/progression?mode=hero"
             f"&anchor_match={feeder[0]}&anchor_player={feeder[1]}", expect=200)
    rec.write("browse.json")
    meta["lasso_members"] = lasso
    meta["narrowing_flow"] = narrowing
    meta["empty_flow"] = empty
    meta["narrowed_members"] = narrowed["members"]
    meta["afk"] = afk
    meta["feeder"] = feeder
    meta["duration_s"] = duration


def walk_filters(tmp: Path, meta: dict) -> None:
    rec = Recorder()
    sid = fresh_session(rec)
    raw = "death:8:99"
    quoted = urllib.parse.quote(raw, safe="")
    filtered = rec.call("players_filtered", "GET",
                        f"/sessions/{sid}/players?filters={quoted}", expect=200)
    assert filtered["counts"]["focused"] == 1, filtered["counts"]
    rec.call("projection_too_few", "GET", f"/sessions/{sid}/projection",
             expect=422)
    cleared = rec.call("players_cleared", "GET",
                       f"/sessions/{sid}/players?filters=", expect=200)
    assert cleared["counts"]["focused"] == 80
    rec.call("projection_restored", "GET", f"/sessions/{sid}/projection",
             expect=200)
    rec.write("filters.json")
    meta["filter_query"] = raw
    meta["filtered_members"] = [
        [r["match_id"], r["player_id"]] for r in filtered["members"]
    ]


def walk_summary_replay(tmp: Path, meta: dict) -> None:
    rec = Recorder()
    sid = fresh_session(rec)
    _, feeder = find_plants(tmp)
    projection = rec.exchanges[-1]["response"]
    lasso = derive_lasso(projection, feeder)
    rec.call("lasso", "POST", f"/sessions/{sid}/lasso", {"members": lasso},
             expect=200)
    rec.call("progression_lasso", "GET",
             f"/sessions/{sid}/progression?mode=lasso", expect=200)
    summary = rec.call("summary", "GET", f"/matches/{feeder[0]}/summary",
                       expect=200)
    duration = summary["duration_s"]
    rec.call("replay_full", "GET",
             replay_path(feeder[0], feeder[1], 0, duration), expect=200)
    rec.call("replay_brushed", "GET",
             replay_path(feeder[0], feeder[1], 60, 180), expect=200)
    rec.call("replay_full_again", "GET",
             replay_path(feeder[0], feeder[1], 0, duration), expect=200)
    rec.call("profile", "GET",
             f"/matches/{feeder[0]}/profile?player={feeder[1]}", expect=200)
    rec.write("summary_replay.json")
    meta["brush"] = [60, 180]


def walk_labelflow(tmp: Path, meta: dict) -> None:
    rec = Recorder()
    sid = fresh_session(rec)
    afk, feeder = find_plants(tmp)
    players = rec.exchanges[1]["response"]
    members = sorted(
        (r["match_id"], r["player_id"]) for r in players["members"]
    )
    plants = {tuple(afk), tuple(feeder)}
    others = [m for m in members if m not in plants]
    actors = [feeder, afk, list(others[0])]
    normals = [list(m) for m in others[1:4]]
    rec.call("predict_unlabeled", "POST", f"/sessions/{sid}/predict",
             expect=409)
    for i, (member, label) in enumerate(
        [(m, "actor") for m in actors] + [(m, "normal") for m in normals]
    ):
        rec.call(f"label_{i}", "POST", "/labels",
                 {"match_id": member[0], "player_id": member[1],
                  "label": label, "source": "human"}, expect=200)
        rec.call(f"players_after_label_{i}", "GET",
                 f"/sessions/{sid}/players", expect=200)
        rec.call(f"projection_after_label_{i}", "GET",
                 f"/sessions/{sid}/projection", expect=200)
    predicted = rec.call("predict", "POST", f"/sessions/{sid}/predict",
                         expect=200)
    assert predicted["trained_on"] == {"normal": 3, "actor": 3}
    rec.call("players_after_predict", "GET", f"/sessions/{sid}/players",
             expect=200)
    rec.call("projection_after_predict", "GET",
             f"/sessions/{sid}/projection", expect=200)
    rec.write("labelflow.json")
    meta["label_actors"] = actors
    meta["label_normals"] = normals


def run_walk(walk, meta: dict) -> None:
    tmp = Path(tempfile.mkdtemp(prefix="uifix-"))
    proc = None
    try:
        proc = boot_server(tmp)
        walk(tmp, meta)
    finally:
        if proc is not None:
            stop_server(proc)
        shutil.rmtree(tmp, ignore_errors=True)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    meta: dict = {
        "corpus": {"matches": 8, "seed": 5,
                   "mix": "normal=0.75,afk=0.125,feeder=0.125"},
        "session_seed": SESSION_SEED,
    }
    for walk in (walk_browse, walk_filters, walk_summary_replay, walk_labelflow):
        run_walk(walk, meta)
    (FIXTURES / "meta.json").write_text(
        json.dumps(meta, indent=1, sort_keys=True) + "\n"
    )
    print(f"wrote {FIXTURES / 'meta.json'}")


if __name__ == "__main__":
    os.chdir(HERE)
    main()
