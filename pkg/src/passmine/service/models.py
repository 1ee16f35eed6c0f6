"""Request and response bodies for the service endpoints."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from ..config import AnalysisParams
from ..ingest import PassEvent
from ..patterns import SearchConfig
from ..scaling import ScalingConfig


class HealthResponse(BaseModel):
    status: str
    version: str


class RatioRequest(BaseModel):
    a: str
    b: str


class RatioResponse(BaseModel):
    ratio: int


class ExtractRequest(BaseModel):
    query: str
    choices: list[str]
    score_cutoff: int = 75
    limit: int = 10


class ExtractMatch(BaseModel):
    index: int          # position in the request's choices
    text: str
    ratio: int


class ExtractResponse(BaseModel):
    matches: list[ExtractMatch]


class ParamsModel(BaseModel):
    """Analysis knobs; field names match the config file."""

    team_id: int = 676
    tags: list[int] = Field(default_factory=lambda: [301, 302, 1801, 1802])
    bins_per_half: int = 10
    max_minutes: float = 50.0
    overflow_policy: str = "clamp"
    min_support: int = 1
    score_cutoff: int = 75
    limit: int = 10
    strict: bool = False
    dedup_hits: bool = False

    def to_params(self) -> AnalysisParams:
        return AnalysisParams(
            team_id=self.team_id,
            tags=frozenset(self.tags),
            scaling=ScalingConfig(
                bins_per_half=self.bins_per_half,
                max_minutes=self.max_minutes,
                overflow_policy=self.overflow_policy,
            ),
            min_support=self.min_support,
            search=SearchConfig(score_cutoff=self.score_cutoff, limit=self.limit),
            strict=self.strict,
            dedup_hits=self.dedup_hits,
        )

    @classmethod
    def from_params(cls, params: AnalysisParams) -> ParamsModel:
        return cls(**params.to_json_dict())


class PassRecord(BaseModel):
    event_id: int
    match_id: int
    period: str
    event_sec: float
    passer_id: int
    receiver_id: int | None = None
    tags: list[int] = Field(default_factory=list)

    def to_event(self) -> PassEvent:
        return PassEvent(
            event_id=self.event_id,
            match_id=self.match_id,
            period=self.period,
            event_sec=self.event_sec,
            passer_id=self.passer_id,
            receiver_id=self.receiver_id,
            tags=frozenset(self.tags),
        )

    @classmethod
    def from_event(cls, p: PassEvent) -> PassRecord:
        return cls(
            event_id=p.event_id,
            match_id=p.match_id,
            period=p.period,
            event_sec=p.event_sec,
            passer_id=p.passer_id,
            receiver_id=p.receiver_id,
            tags=sorted(p.tags),
        )


class IngestRequest(BaseModel):
    events: list[dict[str, Any]]
    team_id: int = 676
    tags: list[int] = Field(default_factory=lambda: [301, 302, 1801, 1802])
    strict: bool = False


class HalfPasses(BaseModel):
    match: int
    period: str
    passes: list[PassRecord]


class DroppedModel(BaseModel):
    event_id: int
    reason: str


class SkippedModel(BaseModel):
    index: int
    reason: str
    event_id: int | None = None


class IngestResponse(BaseModel):
    halves: list[HalfPasses]
    dropped: list[DroppedModel]
    skipped: list[SkippedModel]
    total_events: int
    team_passes: int
    resolved: int


class ScaleRequest(BaseModel):
    passes: list[PassRecord]
    bins_per_half: int = 10
    max_minutes: float = 50.0
    overflow_policy: str = "clamp"
    name: str | None = None


class ScaleResponse(BaseModel):
    name: str
    objects: list[str]
    attributes: list[str]
    cxt: str
    pass_count: int
    clamped: int


class ImplicationRecord(BaseModel):
    premise: list[str]
    conclusion: list[str]
    support: int


class BasisRequest(BaseModel):
    cxt: str
    min_support: int = 1


class BasisResponse(BaseModel):
    implications: list[ImplicationRecord]
    retained: list[ImplicationRecord]
    text: str
    retained_text: str
    nonzero_support: int


class HalfConclusions(BaseModel):
    match: int
    period: str
    conclusions: list[str]


class SearchRequest(BaseModel):
    index: HalfConclusions
    targets: list[HalfConclusions]
    score_cutoff: int = 75
    limit: int = 10
    dedup_hits: bool = False


class HitModel(BaseModel):
    target_index: int   # position in the target half's conclusions
    target_text: str
    ratio: int


class GroupModel(BaseModel):
    query_index: int    # position in the index half's conclusions
    query_text: str
    target_match: int
    target_period: str
    matches: list[HitModel]


class SearchResponse(BaseModel):
    groups: list[GroupModel]
    hit_count: int


class HalfRefModel(BaseModel):
    match: int
    period: str


class PipelineRequest(BaseModel):
    events: list[dict[str, Any]]
    index: HalfRefModel
    targets: list[HalfRefModel]
    params: ParamsModel = Field(default_factory=ParamsModel)


class HalfArtifacts(BaseModel):
    match: int
    period: str
    passes: list[PassRecord]
    cxt: str
    basis_text: str
    retained_text: str
    implications: list[ImplicationRecord]
    retained: list[ImplicationRecord]
    summary: dict[str, Any]


class PipelineResponse(BaseModel):
    report: dict[str, Any]
    report_csv: str
    halves: list[HalfArtifacts]
    dropped: list[DroppedModel]
