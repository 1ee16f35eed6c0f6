"""Reading Wyscout-style match event logs into typed pass records.

The raw log is one JSON array of event objects covering many matches.
Ingest parses the records it needs, keeps one team's passes, infers each
pass's receiver from the immediately following event, and splits the
result by match half.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

DEFAULT_TEAM_ID = 676
DEFAULT_PASS_TAGS = frozenset({1801, 1802, 301, 302})

_REQUIRED = ("id", "matchId", "teamId", "playerId", "eventName", "matchPeriod", "eventSec")


class EventParseError(ValueError):
    """A record (or the file itself) could not be parsed."""


@dataclass(frozen=True)
class RawEvent:
    """One event from the log, as far as this pipeline cares."""

    event_id: int       # the record's unique "id"
    match_id: int
    team_id: int
    player_id: int
    event_name: str
    period: str         # "1H", "2H", ...
    event_sec: float    # seconds into the period
    tags: frozenset[int]
    positions: tuple[tuple[float, float], ...] = ()   # (x, y) percent pairs
    event_type_id: int | None = None   # record "eventId" (a type code)
    sub_event_name: str | None = None
    sub_event_id: int | None = None

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "id": self.event_id,
            "matchId": self.match_id,
            "teamId": self.team_id,
            "playerId": self.player_id,
            "eventName": self.event_name,
            "matchPeriod": self.period,
            "eventSec": self.event_sec,
            "tags": [{"id": t} for t in sorted(self.tags)],
            "positions": [{"x": x, "y": y} for x, y in self.positions],
        }
        if self.event_type_id is not None:
            rec["eventId"] = self.event_type_id
        if self.sub_event_name is not None:
            rec["subEventName"] = self.sub_event_name
        if self.sub_event_id is not None:
            rec["subEventId"] = self.sub_event_id
        return rec


@dataclass(frozen=True)
class PassEvent:
    """A team pass, optionally annotated with its inferred receiver."""

    event_id: int
    match_id: int
    period: str
    event_sec: float
    passer_id: int
    receiver_id: int | None = None
    tags: frozenset[int] = frozenset()

    def to_record(self) -> dict[str, Any]:
        return {
            "event_id": self.event_id,
            "match_id": self.match_id,
            "period": self.period,
            "event_sec": self.event_sec,
            "passer_id": self.passer_id,
            "receiver_id": self.receiver_id,
            "tags": sorted(self.tags),
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> PassEvent:
        return cls(
            event_id=int(rec["event_id"]),
            match_id=int(rec["match_id"]),
            period=str(rec["period"]),
            event_sec=float(rec["event_sec"]),
            passer_id=int(rec["passer_id"]),
            receiver_id=None if rec.get("receiver_id") is None else int(rec["receiver_id"]),
            tags=frozenset(int(t) for t in rec.get("tags", ())),
        )


@dataclass(frozen=True)
class SkippedRecord:
    index: int          # position in the input array
    reason: str
    event_id: int | None = None


@dataclass(frozen=True)
class ParseResult:
    events: tuple[RawEvent, ...]
    skipped: tuple[SkippedRecord, ...]


@dataclass(frozen=True)
class DroppedPass:
    event: PassEvent
    reason: str         # "opponent_next" | "same_player_next" | "end_of_period"


@dataclass(frozen=True)
class ReceiverResult:
    resolved: tuple[PassEvent, ...]
    dropped: tuple[DroppedPass, ...]


def parse_event_record(rec: dict[str, Any]) -> RawEvent:
    """Typed view of one event object.

    Raises EventParseError when a required field is missing or has the
    wrong shape; unknown extra fields are ignored.
    """
    if not isinstance(rec, dict):
        raise EventParseError(f"event record must be an object, got {type(rec).__name__}")
    missing = [k for k in _REQUIRED if k not in rec]
    if missing:
        raise EventParseError(f"event record missing field(s): {', '.join(missing)}")
    try:
        raw_tags = rec.get("tags", [])
        if not isinstance(raw_tags, list):
            raise EventParseError("tags must be a list")
        tags = frozenset(int(t["id"]) for t in raw_tags)
        raw_pos = rec.get("positions", [])
        if not isinstance(raw_pos, list):
            raise EventParseError("positions must be a list")
        positions = tuple((float(p["x"]), float(p["y"])) for p in raw_pos)
        return RawEvent(
            event_id=int(rec["id"]),
            match_id=int(rec["matchId"]),
            team_id=int(rec["teamId"]),
            player_id=int(rec["playerId"]),
            event_name=str(rec["eventName"]),
            period=str(rec["matchPeriod"]),
            event_sec=float(rec["eventSec"]),
            tags=tags,
            positions=positions,
            event_type_id=None if rec.get("eventId") is None else int(rec["eventId"]),
            sub_event_name=None if rec.get("subEventName") in (None, "") else str(rec["subEventName"]),
            sub_event_id=None if rec.get("subEventId") in (None, "") else int(rec["subEventId"]),
        )
    except EventParseError:
        raise
    except (TypeError, ValueError, KeyError) as e:
        raise EventParseError(f"malformed event record: {e}") from e


def parse_event_records(data: list[Any], *, strict: bool = False) -> ParseResult:
    """Parse already-decoded event objects.

    Malformed records are skipped and reported, or abort in strict mode.
    """
    events: list[RawEvent] = []
    skipped: list[SkippedRecord] = []
    for i, rec in enumerate(data):
        try:
            events.append(parse_event_record(rec))
        except EventParseError as e:
            if strict:
                raise EventParseError(f"record {i}: {e}") from e
            eid = rec.get("id") if isinstance(rec, dict) else None
            skipped.append(SkippedRecord(index=i, reason=str(e), event_id=eid if isinstance(eid, int) else None))
    return ParseResult(events=tuple(events), skipped=tuple(skipped))


def decode_event_array(text: str) -> list[Any]:
    """Decode the file-level JSON array, reporting errors by byte offset."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        raise EventParseError(f"invalid JSON at byte {offset}: {e.msg}") from e
    if not isinstance(data, list):
        raise EventParseError(f"expected a JSON array of events, got {type(data).__name__}")
    return data


def parse_events(text: str, *, strict: bool = False) -> ParseResult:
    """Parse a JSON array of event records.

    Record-level defects follow :func:`parse_event_records`; a file that
    is not a JSON array at all always raises, with the byte offset of the
    error.
    """
    return parse_event_records(decode_event_array(text), strict=strict)


def parse_events_file(path: str | Path, *, strict: bool = False) -> ParseResult:
    return parse_events(Path(path).read_text(encoding="utf-8"), strict=strict)


def _period_rank(period: str) -> tuple[int, str]:
    order = {"1H": 0, "2H": 1, "E1": 2, "E2": 3, "P": 4}
    return (order.get(period, len(order)), period)


def sort_chronological(events: Iterable[RawEvent]) -> list[RawEvent]:
    """Match order: by period, then time, event id breaking exact ties."""
    return sorted(events, key=lambda e: (e.match_id, _period_rank(e.period), e.event_sec, e.event_id))


def filter_team_passes(
    events: Iterable[RawEvent],
    team_id: int = DEFAULT_TEAM_ID,
    pass_tags: frozenset[int] = DEFAULT_PASS_TAGS,
) -> list[RawEvent]:
    """The team's pass events, preserving input order.

    A pass is any "Pass" event carrying at least one of the given tag ids.
    """
    return [
        e
        for e in events
        if e.team_id == team_id and e.event_name == "Pass" and e.tags & pass_tags
    ]


def infer_receivers(
    all_events: Iterable[RawEvent],
    passes: Sequence[RawEvent],
    pass_tags: frozenset[int] = DEFAULT_PASS_TAGS,
) -> ReceiverResult:
    """Resolve each pass's receiver as the actor of the next event.

    The next event must be in the same match and period, by the passer's
    team, and by a different player; otherwise the pass is dropped with a
    reason (opponent_next, same_player_next, or end_of_period when nothing
    follows in the half).
    """
    ordered = sort_chronological(all_events)
    next_of: dict[int, RawEvent | None] = {}
    for cur, nxt in zip(ordered, ordered[1:]):
        same_half = nxt.match_id == cur.match_id and nxt.period == cur.period
        next_of[cur.event_id] = nxt if same_half else None
    if ordered:
        next_of[ordered[-1].event_id] = None

    resolved: list[PassEvent] = []
    dropped: list[DroppedPass] = []
    for ev in passes:
        pe = PassEvent(
            event_id=ev.event_id,
            match_id=ev.match_id,
            period=ev.period,
            event_sec=ev.event_sec,
            passer_id=ev.player_id,
            tags=ev.tags & pass_tags,
        )
        nxt = next_of.get(ev.event_id)
        if nxt is None:
            dropped.append(DroppedPass(pe, "end_of_period"))
        elif nxt.team_id != ev.team_id:
            dropped.append(DroppedPass(pe, "opponent_next"))
        elif nxt.player_id == ev.player_id:
            dropped.append(DroppedPass(pe, "same_player_next"))
        else:
            resolved.append(replace(pe, receiver_id=nxt.player_id))
    return ReceiverResult(resolved=tuple(resolved), dropped=tuple(dropped))


def split_halves(passes: Iterable[PassEvent]) -> dict[str, list[PassEvent]]:
    """Partition one match's passes by period, chronological within each.

    Periods beyond 1H/2H (extra time) appear under their own keys.
    """
    ordered = sorted(passes, key=lambda p: (_period_rank(p.period), p.event_sec, p.event_id))
    match_ids = {p.match_id for p in ordered}
    if len(match_ids) > 1:
        raise ValueError(f"passes span several matches: {sorted(match_ids)}")
    groups: dict[str, list[PassEvent]] = {}
    for p in ordered:
        groups.setdefault(p.period, []).append(p)
    return groups


def group_halves(passes: Iterable[PassEvent]) -> dict[tuple[int, str], list[PassEvent]]:
    """Partition passes from any number of matches by (match, period)."""
    ordered = sorted(passes, key=lambda p: (p.match_id, _period_rank(p.period), p.event_sec, p.event_id))
    groups: dict[tuple[int, str], list[PassEvent]] = {}
    for p in ordered:
        groups.setdefault((p.match_id, p.period), []).append(p)
    return groups


def write_passes_jsonl(passes: Iterable[PassEvent], path: str | Path) -> None:
    """One pass per line, keys in a fixed order, byte-stable."""
    lines = [json.dumps(p.to_record(), separators=(", ", ": ")) for p in passes]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_passes_jsonl(path: str | Path) -> list[PassEvent]:
    out: list[PassEvent] = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            out.append(PassEvent.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise EventParseError(f"{path}, line {i + 1}: {e}") from e
    return out


@dataclass(frozen=True)
class MatchMeta:
    match_id: int                       # the dataset's wyId
    label: str | None = None
    date: str | None = None             # "YYYY-MM-DD"
    team_ids: frozenset[int] = frozenset()


def load_match_meta(
    matches_path: str | Path,
    players_path: str | Path | None = None,
) -> tuple[dict[int, MatchMeta], dict[int, str]]:
    """Display metadata: matches keyed by id, plus a player-name map."""
    data = _load_json_array(matches_path, "matches")
    matches: dict[int, MatchMeta] = {}
    for rec in data:
        if not isinstance(rec, dict) or "wyId" not in rec:
            continue
        mid = int(rec["wyId"])
        label = rec.get("label")
        dateutc = rec.get("dateutc")
        teams = rec.get("teamsData")
        matches[mid] = MatchMeta(
            match_id=mid,
            label=str(label) if label is not None else None,
            date=str(dateutc).split(" ")[0] if dateutc else None,
            team_ids=frozenset(int(t) for t in teams) if isinstance(teams, dict) else frozenset(),
        )

    names: dict[int, str] = {}
    if players_path is not None:
        for rec in _load_json_array(players_path, "players"):
            if not isinstance(rec, dict) or "wyId" not in rec:
                continue
            name = rec.get("shortName")
            if name:
                names[int(rec["wyId"])] = str(name)
    return matches, names


def display_name(player_id: int, names: dict[int, str]) -> str:
    """Player name when known, else the id as text."""
    return names.get(player_id, str(player_id))


def _load_json_array(path: str | Path, what: str) -> list[Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise EventParseError(f"{path}: invalid JSON: {e.msg}") from e
    if not isinstance(data, list):
        raise EventParseError(f"{what} file must hold a JSON array")
    return data
