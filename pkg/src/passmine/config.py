"""Run configuration: analysis knobs, dataset paths, serialization.

A config round-trips through JSON byte-identically so a run can be
reproduced from its recorded config file alone.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .ingest import DEFAULT_PASS_TAGS, DEFAULT_TEAM_ID
from .patterns import SearchConfig
from .scaling import ScalingConfig

DATA_DIR_ENV = "PASSMINE_DATA_DIR"
DEFAULT_EVENTS_FILE = "events_Spain.json"
DEFAULT_MATCHES_FILE = "matches_Spain.json"
DEFAULT_PLAYERS_FILE = "players.json"


@dataclass(frozen=True)
class AnalysisParams:
    """Everything that shapes the computation, independent of file layout."""

    team_id: int = DEFAULT_TEAM_ID
    tags: frozenset[int] = DEFAULT_PASS_TAGS
    scaling: ScalingConfig = field(default_factory=ScalingConfig)
    min_support: int = 1
    search: SearchConfig = field(default_factory=SearchConfig)
    strict: bool = False
    dedup_hits: bool = False

    def __post_init__(self) -> None:
        if self.min_support < 1:
            raise ValueError(f"min_support must be >= 1, got {self.min_support}")
        if not self.tags:
            raise ValueError("tags must be non-empty")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "team_id": self.team_id,
            "tags": sorted(self.tags),
            "bins_per_half": self.scaling.bins_per_half,
            "max_minutes": self.scaling.max_minutes,
            "overflow_policy": self.scaling.overflow_policy,
            "min_support": self.min_support,
            "score_cutoff": self.search.score_cutoff,
            "limit": self.search.limit,
            "strict": self.strict,
            "dedup_hits": self.dedup_hits,
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> AnalysisParams:
        base = cls()
        known = set(base.to_json_dict())
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        return cls(
            team_id=int(data.get("team_id", base.team_id)),
            tags=frozenset(int(t) for t in data["tags"]) if "tags" in data else base.tags,
            scaling=ScalingConfig(
                bins_per_half=int(data.get("bins_per_half", base.scaling.bins_per_half)),
                max_minutes=float(data.get("max_minutes", base.scaling.max_minutes)),
                overflow_policy=str(data.get("overflow_policy", base.scaling.overflow_policy)),
            ),
            min_support=int(data.get("min_support", base.min_support)),
            search=SearchConfig(
                score_cutoff=int(data.get("score_cutoff", base.search.score_cutoff)),
                limit=int(data.get("limit", base.search.limit)),
            ),
            strict=bool(data.get("strict", base.strict)),
            dedup_hits=bool(data.get("dedup_hits", base.dedup_hits)),
        )


@dataclass(frozen=True)
class DatasetPaths:
    events: Path
    matches: Path | None = None
    players: Path | None = None

    @classmethod
    def from_root(cls, root: str | Path) -> DatasetPaths:
        root = Path(root)
        matches = root / DEFAULT_MATCHES_FILE
        players = root / DEFAULT_PLAYERS_FILE
        return cls(
            events=root / DEFAULT_EVENTS_FILE,
            matches=matches if matches.exists() else None,
            players=players if players.exists() else None,
        )

    @classmethod
    def from_env(cls) -> DatasetPaths | None:
        root = os.environ.get(DATA_DIR_ENV)
        return cls.from_root(root) if root else None

    def validate(self) -> None:
        """Fail fast before any stage runs."""
        for p in (self.events, self.matches, self.players):
            if p is not None and not Path(p).is_file():
                raise FileNotFoundError(f"dataset file not found: {p}")


@dataclass(frozen=True)
class PipelineConfig:
    params: AnalysisParams
    paths: DatasetPaths
    out_dir: Path

    def to_json_dict(self) -> dict[str, Any]:
        d = self.params.to_json_dict()
        d["events_path"] = str(self.paths.events)
        d["matches_path"] = None if self.paths.matches is None else str(self.paths.matches)
        d["players_path"] = None if self.paths.players is None else str(self.paths.players)
        d["out_dir"] = str(self.out_dir)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> PipelineConfig:
        data = dict(data)
        try:
            events = Path(data.pop("events_path"))
            out_dir = Path(data.pop("out_dir"))
        except KeyError as e:
            raise ValueError(f"config missing key {e.args[0]!r}") from None
        matches = data.pop("matches_path", None)
        players = data.pop("players_path", None)
        return cls(
            params=AnalysisParams.from_json_dict(data),
            paths=DatasetPaths(
                events=events,
                matches=None if matches is None else Path(matches),
                players=None if players is None else Path(players),
            ),
            out_dir=out_dir,
        )

    @classmethod
    def from_json(cls, text: str) -> PipelineConfig:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        return cls.from_json_dict(data)
