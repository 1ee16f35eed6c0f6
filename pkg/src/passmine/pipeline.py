"""End-to-end analysis: events to per-half bases to a similarity report.

One half of one match is the unit of analysis.  The index half's retained
implication conclusions are the queries; each target half's conclusions
are the choices; every query is matched against every target half.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .config import AnalysisParams
from .fca.context import FormalContext
from .fca.implications import ImplicationBasis, canonical_basis, filter_support
from .ingest import (
    PassEvent,
    RawEvent,
    ReceiverResult,
    filter_team_passes,
    group_halves,
    infer_receivers,
    sort_chronological,
)
from .patterns import (
    ConclusionString,
    SearchConfig,
    SimilarityMatch,
    extract_similar,
    stringify_conclusion,
)
from .scaling import scale_context_with_stats

HalfRef = tuple[int, str]   # (match_id, period)

CSV_COLUMNS = ("query_text", "target_match", "target_period", "target_text", "ratio")


@dataclass(frozen=True)
class HalfAnalysis:
    """One half's context, basis, and query-ready conclusion strings."""

    match_id: int
    period: str
    context: FormalContext
    basis: ImplicationBasis             # full canonical basis
    retained: ImplicationBasis          # after the support filter
    conclusions: tuple[ConclusionString, ...]
    pass_count: int
    clamped: int

    @property
    def half(self) -> HalfRef:
        return (self.match_id, self.period)

    @property
    def nonzero_support(self) -> int:
        return sum(1 for imp in self.basis if imp.support >= 1)

    def summary(self) -> dict[str, Any]:
        return {
            "match": self.match_id,
            "period": self.period,
            "objects": len(self.context.objects),
            "attributes": len(self.context.attributes),
            "passes": self.pass_count,
            "clamped": self.clamped,
            "implications": len(self.basis),
            "nonzero_support": self.nonzero_support,
            "retained": len(self.retained),
        }


@dataclass(frozen=True)
class MatchGroup:
    query: ConclusionString
    target_half: HalfRef
    matches: tuple[SimilarityMatch, ...]


@dataclass(frozen=True)
class SearchReport:
    index: HalfRef
    targets: tuple[HalfRef, ...]
    params: AnalysisParams
    halves: tuple[dict[str, Any], ...]
    total_nonzero_support: int
    groups: tuple[MatchGroup, ...]

    @property
    def hit_count(self) -> int:
        return sum(len(g.matches) for g in self.groups)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "index": {"match": self.index[0], "period": self.index[1]},
            "targets": [{"match": m, "period": p} for m, p in self.targets],
            "params": self.params.to_json_dict(),
            "halves": list(self.halves),
            "total_nonzero_support": self.total_nonzero_support,
            "hit_count": self.hit_count,
            "groups": [
                {
                    "query_text": g.query.text,
                    "query_source": list(g.query.source) if g.query.source else None,
                    "target_match": g.target_half[0],
                    "target_period": g.target_half[1],
                    "matches": [
                        {
                            "target_text": m.target.text,
                            "target_source": list(m.target.source) if m.target.source else None,
                            "ratio": m.ratio,
                        }
                        for m in g.matches
                    ],
                }
                for g in self.groups
            ],
        }

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for g in self.groups:
            for m in g.matches:
                w.writerow([g.query.text, g.target_half[0], g.target_half[1], m.target.text, m.ratio])
        return buf.getvalue()


@dataclass(frozen=True)
class PipelineResult:
    report: SearchReport
    analyses: dict[HalfRef, HalfAnalysis]
    receivers: ReceiverResult
    passes_by_half: dict[HalfRef, list[PassEvent]] = field(default_factory=dict)


def prepare_passes(
    events: Iterable[RawEvent], params: AnalysisParams
) -> tuple[ReceiverResult, dict[HalfRef, list[PassEvent]]]:
    """Team passes with resolved receivers, grouped by (match, period)."""
    ordered = sort_chronological(events)
    passes = filter_team_passes(ordered, params.team_id, params.tags)
    result = infer_receivers(ordered, passes, params.tags)
    return result, group_halves(result.resolved)


def analyze_half(
    half: HalfRef, passes: Sequence[PassEvent], params: AnalysisParams
) -> HalfAnalysis:
    """Scale one half's passes and compute its basis and query strings."""
    match_id, period = half
    ctx, stats = scale_context_with_stats(passes, params.scaling, name=f"{match_id}_{period}")
    basis = canonical_basis(ctx)
    retained = filter_support(basis, params.min_support)
    conclusions = tuple(
        stringify_conclusion(imp.conclusion, ctx, source=(match_id, period, i))
        for i, imp in enumerate(retained)
    )
    return HalfAnalysis(
        match_id=match_id,
        period=period,
        context=ctx,
        basis=basis,
        retained=retained,
        conclusions=conclusions,
        pass_count=stats.pass_count,
        clamped=stats.clamped_events,
    )


def search_conclusions(
    queries: Sequence[ConclusionString],
    targets: Sequence[tuple[HalfRef, Sequence[ConclusionString]]],
    cfg: SearchConfig,
    *,
    dedup_hits: bool = False,
) -> tuple[MatchGroup, ...]:
    """One group per (query conclusion, target half), in that nesting order.

    A target half without conclusions still yields its (empty) groups, so
    the report shows it was searched.  With dedup_hits, repeats of one
    (query text, target half, target text) row are collapsed, keeping the
    first.
    """
    seen: set[tuple[str, int, str, str]] = set()
    groups: list[MatchGroup] = []
    for query in queries:
        for half, conclusions in targets:
            matches = extract_similar(query, conclusions, cfg)
            if dedup_hits:
                kept = []
                for m in matches:
                    key = (query.text, half[0], half[1], m.target.text)
                    if key in seen:
                        continue
                    seen.add(key)
                    kept.append(m)
                matches = kept
            groups.append(MatchGroup(query=query, target_half=half, matches=tuple(matches)))
    return tuple(groups)


def run_search(
    index: HalfAnalysis,
    targets: Sequence[HalfAnalysis],
    params: AnalysisParams,
) -> tuple[MatchGroup, ...]:
    return search_conclusions(
        index.conclusions,
        [(t.half, t.conclusions) for t in targets],
        params.search,
        dedup_hits=params.dedup_hits,
    )


def run_pipeline(
    index: HalfRef,
    targets: Sequence[HalfRef],
    events: Iterable[RawEvent],
    params: AnalysisParams,
) -> PipelineResult:
    """Full analysis over already-parsed events.

    Every referenced half is analyzed once, even when it has no passes
    (yielding the empty context and an empty basis).
    """
    receivers, by_half = prepare_passes(events, params)
    wanted: list[HalfRef] = []
    for half in (index, *targets):
        if half not in wanted:
            wanted.append(half)
    analyses = {half: analyze_half(half, by_half.get(half, []), params) for half in wanted}
    groups = run_search(analyses[index], [analyses[t] for t in targets], params)
    report = SearchReport(
        index=index,
        targets=tuple(targets),
        params=params,
        halves=tuple(analyses[h].summary() for h in wanted),
        total_nonzero_support=sum(analyses[h].nonzero_support for h in wanted),
        groups=groups,
    )
    return PipelineResult(
        report=report,
        analyses=analyses,
        receivers=receivers,
        passes_by_half={h: by_half.get(h, []) for h in wanted},
    )
