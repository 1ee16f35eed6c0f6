"""Command-line front end: staged runs with file artifacts and caching.

Every computation goes through the service client (in-process unless
--server points at a deployment); the CLI's own job is flag handling,
artifact files, and skipping stages whose inputs have not changed.

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .client import ServiceClient, ServiceError
from .config import (
    DATA_DIR_ENV,
    DEFAULT_EVENTS_FILE,
    DEFAULT_MATCHES_FILE,
    DEFAULT_PLAYERS_FILE,
    AnalysisParams,
    DatasetPaths,
    PipelineConfig,
)
from .fca.io import CxtFormatError
from .ingest import EventParseError, PassEvent, decode_event_array, read_passes_jsonl, write_passes_jsonl
from .patterns import ConclusionString, SearchConfig, SimilarityMatch, stringify_labels
from .pipeline import HalfRef, MatchGroup, SearchReport
from .scaling import BinOverflowError, ScalingConfig

_CACHE_FORMAT = 1


class CliUsageError(ValueError):
    """Bad flags or config; exits with code 1."""


def _half_arg(text: str) -> HalfRef:
    match_id, sep, period = text.partition(":")
    if not sep or not period:
        raise argparse.ArgumentTypeError(f"expected MATCH:PERIOD, got {text!r}")
    try:
        return (int(match_id), period)
    except ValueError:
        raise argparse.ArgumentTypeError(f"match id must be an integer in {text!r}")


def _tags_arg(text: str) -> list[int]:
    try:
        tags = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"tags must be comma-separated integers, got {text!r}")
    if not tags:
        raise argparse.ArgumentTypeError("tags must be non-empty")
    return tags


def half_key(half: HalfRef) -> str:
    return f"{half[0]}_{half[1]}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="passmine",
        description="Mine a team's recurring passing sequences from match event logs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--events", type=Path, default=None, help="events JSON file")
        sp.add_argument("--matches", type=Path, default=None, help="matches JSON file (display metadata)")
        sp.add_argument("--players", type=Path, default=None, help="players JSON file (display metadata)")
        sp.add_argument("--out", type=Path, default=None, help="output directory (default: out)")
        sp.add_argument("--config", type=Path, default=None, help="config JSON file; flags override it")
        sp.add_argument("--team-id", type=int, default=None, help="team to mine (default: 676)")
        sp.add_argument("--tags", type=_tags_arg, default=None, help="pass tag ids (default: 1801,1802,301,302)")
        sp.add_argument("--bins", type=int, default=None, help="time bins per half (default: 10)")
        sp.add_argument("--max-minutes", type=float, default=None, help="scale reach in minutes (default: 50)")
        sp.add_argument("--overflow", choices=("clamp", "reject"), default=None, help="overflowing bins (default: clamp)")
        sp.add_argument("--min-support", type=int, default=None, help="keep implications with support >= N (default: 1)")
        sp.add_argument("--cutoff", type=int, default=None, help="similarity score cutoff (default: 75)")
        sp.add_argument("--limit", type=int, default=None, help="hits kept per query and target half (default: 10)")
        sp.add_argument("--strict", action=argparse.BooleanOptionalAction, default=None, help="abort on malformed records")
        sp.add_argument("--dedup-hits", action=argparse.BooleanOptionalAction, default=None, help="collapse repeated hit rows")
        sp.add_argument("--server", default=None, help="service base URL (default: run in-process)")
        sp.add_argument("--no-cache", action="store_true", help="recompute every stage")

    sp_ingest = sub.add_parser("ingest", help="parse events and write per-half pass lists")
    add_common(sp_ingest)

    sp_scale = sub.add_parser("scale", help="write per-half contexts in Burmeister CXT format")
    add_common(sp_scale)
    sp_scale.add_argument("--half", type=_half_arg, action="append", default=None, metavar="MATCH:PERIOD")

    sp_basis = sub.add_parser("basis", help="write per-half canonical implication bases")
    add_common(sp_basis)
    sp_basis.add_argument("--half", type=_half_arg, action="append", default=None, metavar="MATCH:PERIOD")

    for name, help_text in (
        ("search", "match an index half's conclusions against target halves"),
        ("pipeline", "run every stage: ingest, scale, basis, search"),
    ):
        sp = sub.add_parser(name, help=help_text)
        add_common(sp)
        sp.add_argument("--index", type=_half_arg, required=True, metavar="MATCH:PERIOD")
        sp.add_argument("--target", type=_half_arg, action="append", required=True, metavar="MATCH:PERIOD")
    return parser


# -- configuration resolution -------------------------------------------------


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, then the config file, then explicit flags."""
    base: PipelineConfig | None = None
    if args.config is not None:
        try:
            base = PipelineConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
        except (ValueError, KeyError) as e:
            raise CliUsageError(f"bad config file {args.config}: {e}") from e

    root = os.environ.get(DATA_DIR_ENV)
    events = args.events or (base.paths.events if base else None)
    if events is None and root:
        events = Path(root) / DEFAULT_EVENTS_FILE
    if events is None:
        raise CliUsageError(f"no events file: pass --events, --config, or set {DATA_DIR_ENV}")
    matches = args.matches or (base.paths.matches if base else None)
    players = args.players or (base.paths.players if base else None)
    if root:
        if matches is None and (Path(root) / DEFAULT_MATCHES_FILE).exists():
            matches = Path(root) / DEFAULT_MATCHES_FILE
        if players is None and (Path(root) / DEFAULT_PLAYERS_FILE).exists():
            players = Path(root) / DEFAULT_PLAYERS_FILE

    prev = base.params if base else AnalysisParams()

    def pick(flag: Any, old: Any) -> Any:
        return old if flag is None else flag

    try:
        params = AnalysisParams(
            team_id=pick(args.team_id, prev.team_id),
            tags=frozenset(args.tags) if args.tags is not None else prev.tags,
            scaling=ScalingConfig(
                bins_per_half=pick(args.bins, prev.scaling.bins_per_half),
                max_minutes=pick(args.max_minutes, prev.scaling.max_minutes),
                overflow_policy=pick(args.overflow, prev.scaling.overflow_policy),
            ),
            min_support=pick(args.min_support, prev.min_support),
            search=SearchConfig(
                score_cutoff=pick(args.cutoff, prev.search.score_cutoff),
                limit=pick(args.limit, prev.search.limit),
            ),
            strict=pick(args.strict, prev.strict),
            dedup_hits=pick(args.dedup_hits, prev.dedup_hits),
        )
    except ValueError as e:
        raise CliUsageError(str(e)) from e

    out_dir = args.out or (base.out_dir if base else Path("out"))
    return PipelineConfig(
        params=params,
        paths=DatasetPaths(events=Path(events), matches=matches, players=players),
        out_dir=Path(out_dir),
    )


# -- stage runtime -------------------------------------------------------------


@dataclass
class Runtime:
    config: PipelineConfig
    client: ServiceClient
    use_cache: bool
    manifest: dict[str, Any] = field(default_factory=dict)

    @property
    def out(self) -> Path:
        return self.config.out_dir

    @property
    def params(self) -> AnalysisParams:
        return self.config.params


def _manifest_path(rt: Runtime) -> Path:
    return rt.out / "manifest.json"


def _load_manifest(rt: Runtime) -> None:
    path = _manifest_path(rt)
    if path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except ValueError:
            data = {}
        if isinstance(data, dict) and data.get("version") == _CACHE_FORMAT:
            rt.manifest = data
            return
    rt.manifest = {"version": _CACHE_FORMAT, "stages": {}}


def _save_manifest(rt: Runtime) -> None:
    _manifest_path(rt).write_text(
        json.dumps(rt.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _stage_key(*parts: Any) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part if isinstance(part, bytes) else str(part).encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def _fresh(rt: Runtime, stage: str, key: str) -> bool:
    if not rt.use_cache:
        return False
    entry = rt.manifest["stages"].get(stage)
    if not entry or entry.get("key") != key:
        return False
    return all((rt.out / f).exists() for f in entry.get("files", []))


def _record(rt: Runtime, stage: str, key: str, files: list[str]) -> None:
    rt.manifest["stages"][stage] = {"key": key, "files": files}


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _read_json(path: Path) -> Any:
    return json.loads(path.read_text(encoding="utf-8"))


# -- stages --------------------------------------------------------------------


def ensure_ingest(rt: Runtime) -> dict[str, Any]:
    """Pass lists per half plus a summary; cached on the events file."""
    events_bytes = rt.config.paths.events.read_bytes()
    p = rt.params
    key = _stage_key(
        __version__, events_bytes, p.team_id, sorted(p.tags), p.strict
    )
    summary_path = rt.out / "ingest_summary.json"
    if _fresh(rt, "ingest", key):
        return _read_json(summary_path)

    records = decode_event_array(events_bytes.decode("utf-8"))
    resp = rt.client.ingest(records, team_id=p.team_id, tags=sorted(p.tags), strict=p.strict)

    files = ["ingest_summary.json"]
    half_counts = []
    for half in resp["halves"]:
        name = half_key((half["match"], half["period"]))
        rel = f"passes/{name}.jsonl"
        path = rt.out / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        write_passes_jsonl([PassEvent.from_record(r) for r in half["passes"]], path)
        files.append(rel)
        half_counts.append({"match": half["match"], "period": half["period"], "passes": len(half["passes"])})

    dropped: dict[str, int] = {}
    for d in resp["dropped"]:
        dropped[d["reason"]] = dropped.get(d["reason"], 0) + 1
    summary = {
        "total_events": resp["total_events"],
        "team_passes": resp["team_passes"],
        "resolved": resp["resolved"],
        "dropped": {k: dropped[k] for k in sorted(dropped)},
        "skipped": len(resp["skipped"]),
        "halves": half_counts,
    }
    _write(summary_path, json.dumps(summary, indent=2) + "\n")
    _record(rt, "ingest", key, files)
    if not half_counts:
        print(f"warning: no resolved passes for team {p.team_id}", file=sys.stderr)
    return summary


def ensure_scale(rt: Runtime, half: HalfRef) -> dict[str, Any]:
    """One half's CXT context file; cached on its pass list."""
    name = half_key(half)
    passes_path = rt.out / "passes" / f"{name}.jsonl"
    if not passes_path.exists():
        _write(passes_path, "")
    s = rt.params.scaling
    key = _stage_key(
        __version__, passes_path.read_bytes(), s.bins_per_half, s.max_minutes, s.overflow_policy
    )
    meta_path = rt.out / "contexts" / f"{name}.meta.json"
    if _fresh(rt, f"scale:{name}", key):
        return _read_json(meta_path)

    records = [p.to_record() for p in read_passes_jsonl(passes_path)]
    resp = rt.client.scale(
        records,
        bins_per_half=s.bins_per_half,
        max_minutes=s.max_minutes,
        overflow_policy=s.overflow_policy,
        name=name,
    )
    _write(rt.out / "contexts" / f"{name}.cxt", resp["cxt"])
    meta = {
        "match": half[0],
        "period": half[1],
        "objects": len(resp["objects"]),
        "attributes": len(resp["attributes"]),
        "passes": resp["pass_count"],
        "clamped": resp["clamped"],
    }
    _write(meta_path, json.dumps(meta, indent=2) + "\n")
    if resp["clamped"]:
        print(f"warning: {name}: {resp['clamped']} event(s) clamped to the last bin", file=sys.stderr)
    _record(rt, f"scale:{name}", key, [f"contexts/{name}.cxt", f"contexts/{name}.meta.json"])
    return meta


def ensure_basis(rt: Runtime, half: HalfRef) -> dict[str, Any]:
    """One half's retained basis files; cached on its CXT."""
    name = half_key(half)
    cxt_path = rt.out / "contexts" / f"{name}.cxt"
    key = _stage_key(__version__, cxt_path.read_bytes(), rt.params.min_support)
    meta_path = rt.out / "bases" / f"{name}.meta.json"
    if _fresh(rt, f"basis:{name}", key):
        return _read_json(meta_path)

    resp = rt.client.basis(cxt_path.read_text(encoding="utf-8"), min_support=rt.params.min_support)
    _write(rt.out / "bases" / f"{name}.txt", resp["retained_text"])
    _write(rt.out / "bases" / f"{name}.json", json.dumps(resp["retained"], indent=2) + "\n")
    meta = {
        "implications": len(resp["implications"]),
        "nonzero_support": resp["nonzero_support"],
        "retained": len(resp["retained"]),
    }
    _write(meta_path, json.dumps(meta, indent=2) + "\n")
    _record(
        rt,
        f"basis:{name}",
        key,
        [f"bases/{name}.txt", f"bases/{name}.json", f"bases/{name}.meta.json"],
    )
    return meta


def _half_conclusions(rt: Runtime, half: HalfRef) -> list[str]:
    records = _read_json(rt.out / "bases" / f"{half_key(half)}.json")
    return [stringify_labels(r["conclusion"]) for r in records]


def do_search(rt: Runtime, index: HalfRef, targets: list[HalfRef]) -> dict[str, Any]:
    """Search stage over existing bases; writes report.csv and report.json."""
    wanted: list[HalfRef] = []
    for half in (index, *targets):
        if half not in wanted:
            wanted.append(half)
    summaries: dict[HalfRef, dict[str, Any]] = {}
    for half in wanted:
        ctx_meta = ensure_scale(rt, half)
        basis_meta = ensure_basis(rt, half)
        summaries[half] = {**ctx_meta, **basis_meta}

    p = rt.params
    basis_bytes = [(rt.out / "bases" / f"{half_key(h)}.json").read_bytes() for h in wanted]
    key = _stage_key(
        __version__,
        b"".join(basis_bytes),
        json.dumps({half_key(h): summaries[h] for h in wanted}, sort_keys=True),
        p.search.score_cutoff,
        p.search.limit,
        p.dedup_hits,
        index,
        list(targets),
    )
    report_json_path = rt.out / "report.json"
    if _fresh(rt, "search", key):
        return _read_json(report_json_path)

    resp = rt.client.search(
        {"match": index[0], "period": index[1], "conclusions": _half_conclusions(rt, index)},
        [
            {"match": t[0], "period": t[1], "conclusions": _half_conclusions(rt, t)}
            for t in targets
        ],
        score_cutoff=p.search.score_cutoff,
        limit=p.search.limit,
        dedup_hits=p.dedup_hits,
    )
    groups = []
    for g in resp["groups"]:
        query = ConclusionString(text=g["query_text"], source=(index[0], index[1], g["query_index"]))
        groups.append(
            MatchGroup(
                query=query,
                target_half=(g["target_match"], g["target_period"]),
                matches=tuple(
                    SimilarityMatch(
                        query=query,
                        target=ConclusionString(
                            text=hit["target_text"],
                            source=(g["target_match"], g["target_period"], hit["target_index"]),
                        ),
                        ratio=hit["ratio"],
                    )
                    for hit in g["matches"]
                ),
            )
        )
    report = SearchReport(
        index=index,
        targets=tuple(targets),
        params=p,
        halves=tuple(summaries[h] for h in wanted),
        total_nonzero_support=sum(summaries[h]["nonzero_support"] for h in wanted),
        groups=tuple(groups),
    )
    report_dict = report.to_json_dict()
    _write(report_json_path, json.dumps(report_dict, indent=2) + "\n")
    _write(rt.out / "report.csv", report.to_csv_text())
    _record(rt, "search", key, ["report.json", "report.csv"])
    return report_dict


# -- commands ------------------------------------------------------------------


def cmd_ingest(rt: Runtime, args: argparse.Namespace) -> None:
    s = ensure_ingest(rt)
    print(
        f"ingest: {s['total_events']} events, {s['team_passes']} team passes, "
        f"{s['resolved']} resolved, {sum(s['dropped'].values())} dropped, {s['skipped']} skipped"
    )
    for h in s["halves"]:
        print(f"  {h['match']} {h['period']}: {h['passes']} passes")


def _selected_halves(rt: Runtime, args: argparse.Namespace) -> list[HalfRef]:
    if args.half:
        return list(args.half)
    summary = ensure_ingest(rt)
    return [(h["match"], h["period"]) for h in summary["halves"]]


def cmd_scale(rt: Runtime, args: argparse.Namespace) -> None:
    ensure_ingest(rt)
    for half in _selected_halves(rt, args):
        meta = ensure_scale(rt, half)
        print(f"scale: {half_key(half)}: {meta['objects']}x{meta['attributes']} context")


def cmd_basis(rt: Runtime, args: argparse.Namespace) -> None:
    ensure_ingest(rt)
    for half in _selected_halves(rt, args):
        ensure_scale(rt, half)
        meta = ensure_basis(rt, half)
        print(
            f"basis: {half_key(half)}: {meta['implications']} implications, "
            f"{meta['retained']} retained"
        )


def cmd_search(rt: Runtime, args: argparse.Namespace) -> None:
    ensure_ingest(rt)
    report = do_search(rt, args.index, list(args.target))
    print(
        f"search: {len(report['groups'])} query/target groups, {report['hit_count']} hits, "
        f"{report['total_nonzero_support']} non-zero-support implications across "
        f"{len(report['halves'])} halves"
    )


def cmd_pipeline(rt: Runtime, args: argparse.Namespace) -> None:
    cmd_search(rt, args)


_COMMANDS = {
    "ingest": cmd_ingest,
    "scale": cmd_scale,
    "basis": cmd_basis,
    "search": cmd_search,
    "pipeline": cmd_pipeline,
}


def _run_command(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    config.paths.validate()
    config.out_dir.mkdir(parents=True, exist_ok=True)
    _write(config.out_dir / "config.json", config.to_json())
    rt = Runtime(config=config, client=ServiceClient(args.server), use_cache=not args.no_cache)
    _load_manifest(rt)
    _COMMANDS[args.command](rt, args)
    _save_manifest(rt)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; fold into the documented code 1
        return 0 if e.code in (0, None) else 1
    try:
        return _run_command(args)
    except CliUsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (EventParseError, BinOverflowError, CxtFormatError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2
    except ServiceError as e:
        print(f"data error: {e}" if e.status_code == 422 else f"error: {e}", file=sys.stderr)
        return 2 if e.status_code == 422 else 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())
