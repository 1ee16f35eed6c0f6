"""FastAPI application exposing the pipeline stage by stage.

The service is stateless: every request carries its own data, so the
same app serves in-process clients and a real deployment alike.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..fca.implications import canonical_basis, filter_support
from ..fca.io import CxtFormatError, basis_to_records, format_basis_text, read_cxt, write_cxt
from ..ingest import EventParseError, parse_event_records
from ..patterns import ConclusionString, SearchConfig, extract_similar, token_sort_ratio
from ..pipeline import prepare_passes, run_pipeline, search_conclusions
from ..scaling import BinOverflowError, ScalingConfig, scale_context_with_stats
from . import models as m


def create_app() -> FastAPI:
    app = FastAPI(title="passmine", version=__version__)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        unprocessable = (EventParseError, BinOverflowError, CxtFormatError)
        status = 422 if isinstance(exc, unprocessable) else 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/health", response_model=m.HealthResponse)
    async def health() -> m.HealthResponse:
        return m.HealthResponse(status="ok", version=__version__)

    @app.post("/similarity/ratio", response_model=m.RatioResponse)
    async def ratio(req: m.RatioRequest) -> m.RatioResponse:
        return m.RatioResponse(ratio=token_sort_ratio(req.a, req.b))

    @app.post("/similarity/extract", response_model=m.ExtractResponse)
    async def extract(req: m.ExtractRequest) -> m.ExtractResponse:
        cfg = SearchConfig(score_cutoff=req.score_cutoff, limit=req.limit)
        choices = [ConclusionString(text=c) for c in req.choices]
        # extract_similar hands back the same choice objects, so identity
        # recovers each hit's position even among equal texts.
        pos = {id(c): i for i, c in enumerate(choices)}
        hits = extract_similar(ConclusionString(text=req.query), choices, cfg)
        return m.ExtractResponse(
            matches=[
                m.ExtractMatch(index=pos[id(h.target)], text=h.target.text, ratio=h.ratio)
                for h in hits
            ]
        )

    @app.post("/ingest", response_model=m.IngestResponse)
    async def ingest(req: m.IngestRequest) -> m.IngestResponse:
        parsed = parse_event_records(req.events, strict=req.strict)
        params = m.ParamsModel(team_id=req.team_id, tags=req.tags, strict=req.strict).to_params()
        receivers, by_half = prepare_passes(parsed.events, params)
        return m.IngestResponse(
            halves=[
                m.HalfPasses(
                    match=match,
                    period=period,
                    passes=[m.PassRecord.from_event(p) for p in passes],
                )
                for (match, period), passes in by_half.items()
            ],
            dropped=[
                m.DroppedModel(event_id=d.event.event_id, reason=d.reason)
                for d in receivers.dropped
            ],
            skipped=[
                m.SkippedModel(index=s.index, reason=s.reason, event_id=s.event_id)
                for s in parsed.skipped
            ],
            total_events=len(parsed.events),
            team_passes=len(receivers.resolved) + len(receivers.dropped),
            resolved=len(receivers.resolved),
        )

    @app.post("/scale", response_model=m.ScaleResponse)
    async def scale(req: m.ScaleRequest) -> m.ScaleResponse:
        cfg = ScalingConfig(
            bins_per_half=req.bins_per_half,
            max_minutes=req.max_minutes,
            overflow_policy=req.overflow_policy,
        )
        ctx, stats = scale_context_with_stats(
            [p.to_event() for p in req.passes], cfg, name=req.name
        )
        return m.ScaleResponse(
            name=ctx.name,
            objects=list(ctx.objects),
            attributes=list(ctx.attributes),
            cxt=write_cxt(ctx),
            pass_count=stats.pass_count,
            clamped=stats.clamped_events,
        )

    @app.post("/basis", response_model=m.BasisResponse)
    async def basis(req: m.BasisRequest) -> m.BasisResponse:
        ctx = read_cxt(req.cxt)
        full = canonical_basis(ctx)
        retained = filter_support(full, req.min_support)
        return m.BasisResponse(
            implications=[m.ImplicationRecord(**r) for r in basis_to_records(full, ctx)],
            retained=[m.ImplicationRecord(**r) for r in basis_to_records(retained, ctx)],
            text=format_basis_text(full, ctx),
            retained_text=format_basis_text(retained, ctx),
            nonzero_support=sum(1 for imp in full if imp.support >= 1),
        )

    @app.post("/search", response_model=m.SearchResponse)
    async def search(req: m.SearchRequest) -> m.SearchResponse:
        cfg = SearchConfig(score_cutoff=req.score_cutoff, limit=req.limit)
        queries = [
            ConclusionString(text=t, source=(req.index.match, req.index.period, i))
            for i, t in enumerate(req.index.conclusions)
        ]
        targets = [
            (
                (t.match, t.period),
                [
                    ConclusionString(text=c, source=(t.match, t.period, i))
                    for i, c in enumerate(t.conclusions)
                ],
            )
            for t in req.targets
        ]
        groups = search_conclusions(queries, targets, cfg, dedup_hits=req.dedup_hits)
        out = [
            m.GroupModel(
                query_index=g.query.source[2] if g.query.source else 0,
                query_text=g.query.text,
                target_match=g.target_half[0],
                target_period=g.target_half[1],
                matches=[
                    m.HitModel(
                        target_index=hit.target.source[2] if hit.target.source else 0,
                        target_text=hit.target.text,
                        ratio=hit.ratio,
                    )
                    for hit in g.matches
                ],
            )
            for g in groups
        ]
        return m.SearchResponse(groups=out, hit_count=sum(len(g.matches) for g in out))

    @app.post("/pipeline", response_model=m.PipelineResponse)
    async def pipeline(req: m.PipelineRequest) -> m.PipelineResponse:
        parsed = parse_event_records(req.events, strict=req.params.strict)
        params = req.params.to_params()
        index = (req.index.match, req.index.period)
        targets = [(t.match, t.period) for t in req.targets]
        result = run_pipeline(index, targets, parsed.events, params)
        halves = []
        for half_summary in result.report.halves:
            half = (half_summary["match"], half_summary["period"])
            a = result.analyses[half]
            halves.append(
                m.HalfArtifacts(
                    match=a.match_id,
                    period=a.period,
                    passes=[
                        m.PassRecord.from_event(p)
                        for p in result.passes_by_half.get(half, [])
                    ],
                    cxt=write_cxt(a.context),
                    basis_text=format_basis_text(a.basis, a.context),
                    retained_text=format_basis_text(a.retained, a.context),
                    implications=[
                        m.ImplicationRecord(**r) for r in basis_to_records(a.basis, a.context)
                    ],
                    retained=[
                        m.ImplicationRecord(**r) for r in basis_to_records(a.retained, a.context)
                    ],
                    summary=half_summary,
                )
            )
        return m.PipelineResponse(
            report=result.report.to_json_dict(),
            report_csv=result.report.to_csv_text(),
            halves=halves,
            dropped=[
                m.DroppedModel(event_id=d.event.event_id, reason=d.reason)
                for d in result.receivers.dropped
            ],
        )

    return app


app = create_app()
