"""Command-line front door: synthesize, ingest, detect, metrics, export, serve.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 operational error (bad paths, malformed input), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .detect import DetectorConfig, filter_low_level
from .metrics import METRIC_COMPONENTS, metric_vector
from .store import Store
from .synth import BadScript, generate_corpus
from .telemetry import TelemetryError, iter_corpus

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

DEFAULT_MIX = "normal=0.8,afk=0.1,feeder=0.1"

METRICS_HEADER = "match_id,player_id," + ",".join(METRIC_COMPONENTS)


def parse_mix(raw: str) -> dict[str, float]:
    """Parse a mix flag value such as ``normal=0.8,afk=0.1,feeder=0.1``."""
    mix: dict[str, float] = {}
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise ValueError(f"mix entry {chunk!r} is not key=fraction")
        mix[key.strip()] = float(value)
    if not mix:
        raise ValueError("mix must name at least one archetype")
    return mix


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _close_out(handle: TextIO) -> None:
    if handle is not sys.stdout:
        handle.close()


def _cmd_synth(args: argparse.Namespace) -> int:
    try:
        mix = parse_mix(args.mix)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        info = generate_corpus(args.matches, mix, args.seed, args.out)
    except BadScript as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(
        json.dumps(
            {
                "matches": info.matches,
                "corpus": str(info.corpus_path),
                "truth": str(info.truth_path),
                "plants": info.plants,
            }
        )
    )
    return EXIT_OK


def _cmd_ingest(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_ERROR
    store = Store(args.data_dir)
    report = store.ingest(path)
    print(json.dumps(report.as_dict()))
    return EXIT_OK


def _detector_config(args: argparse.Namespace) -> DetectorConfig:
    return DetectorConfig(
        afk_threshold_s=args.afk_threshold,
        feeder_ratio_threshold=args.ratio_threshold,
        feeder_count_threshold=args.count_threshold,
    )


def _cmd_detect(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = _detector_config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    thresholds = {
        "afk_s": cfg.afk_threshold_s,
        "ratio": cfg.feeder_ratio_threshold,
        "count": cfg.feeder_count_threshold,
    }
    out = _open_out(args.out)
    try:
        for line_no, item in iter_corpus(path):
            if isinstance(item, TelemetryError):
                print(f"error: {path} line {line_no}: {item}", file=sys.stderr)
                return EXIT_ERROR
            for result in filter_low_level(item, cfg):
                out.write(
                    json.dumps(
                        {
                            "match_id": result.match_id,
                            "player_id": result.player_id,
                            "low_level": result.low_level,
                            "reasons": list(result.reasons),
                            "idle_time_s": result.idle_time_s,
                            "suspected_death_count": result.suspected_death_count,
                            "thresholds": thresholds,
                        },
                        separators=(",", ":"),
                    )
                    + "\n"
                )
    finally:
        _close_out(out)
    return EXIT_OK


def _cmd_metrics(args: argparse.Namespace) -> int:
    path = Path(args.infile)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_ERROR
    out = _open_out(args.out)
    try:
        out.write(METRICS_HEADER + "\n")
        for line_no, item in iter_corpus(path):
            if isinstance(item, TelemetryError):
                print(f"error: {path} line {line_no}: {item}", file=sys.stderr)
                return EXIT_ERROR
            for p in item.players:
                mv = metric_vector(item, p.player_id)
                cells = [item.match_id, p.player_id]
                cells.extend(str(c) for c in mv.counts)
                cells.append(f"{mv.inactive_percentage:.6f}")
                cells.append(str(mv.report_count))
                out.write(",".join(cells) + "\n")
    finally:
        _close_out(out)
    return EXIT_OK


def _cmd_label_export(args: argparse.Namespace) -> int:
    store = Store(args.data_dir)
    out = _open_out(args.out)
    try:
        out.write(store.export_csv())
    finally:
        _close_out(out)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(Store(args.data_dir))
    try:
        uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actorlens",
        description="Detect and label manipulative players from match telemetry.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    synth.add_argument("--matches", type=int, default=60, help="number of matches")
    synth.add_argument("--seed", type=int, default=0, help="corpus seed")
    synth.add_argument("--mix", default=DEFAULT_MIX, help="archetype mix, key=fraction pairs")
    synth.add_argument("--out", required=True, help="corpus JSON Lines path")
    synth.set_defaults(func=_cmd_synth)

    ingest = sub.add_parser("ingest", help="load a corpus file into the store")
    ingest.add_argument("--in", dest="infile", required=True, help="corpus JSON Lines path")
    ingest.add_argument("--data-dir", default=None, help="store root directory")
    ingest.set_defaults(func=_cmd_ingest)

    detect = sub.add_parser("detect", help="run the rule detectors over a corpus")
    detect.add_argument("--in", dest="infile", required=True, help="corpus JSON Lines path")
    detect.add_argument("--out", default=None, help="report path (default stdout)")
    detect.add_argument("--afk-threshold", type=float, default=120.0, help="idle seconds")
    detect.add_argument("--ratio-threshold", type=float, default=0.4, help="damage ratio")
    detect.add_argument("--count-threshold", type=int, default=3, help="suspected deaths")
    detect.set_defaults(func=_cmd_detect)

    metrics = sub.add_parser("metrics", help="write per-player metric vectors as CSV")
    metrics.add_argument("--in", dest="infile", required=True, help="corpus JSON Lines path")
    metrics.add_argument("--out", default=None, help="CSV path (default stdout)")
    metrics.set_defaults(func=_cmd_metrics)

    export = sub.add_parser("label-export", help="export effective labels as CSV")
    export.add_argument("--data-dir", default=None, help="store root directory")
    export.add_argument("--out", default=None, help="CSV path (default stdout)")
    export.set_defaults(func=_cmd_label_export)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8000, help="listen port")
    serve.add_argument("--data-dir", default=None, help="store root directory")
    serve.set_defaults(func=_cmd_serve)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
