"""Recurring-pass-pattern mining over match event logs.

Builds per-half formal contexts from one team's passes, computes each
half's canonical implication basis, and fuzzy-searches implication
conclusions across matches.
"""

__version__ = "0.1.0"

from .config import AnalysisParams, DatasetPaths, PipelineConfig
from .fca import (
    AttributeSet,
    FormalContext,
    Implication,
    ImplicationBasis,
    canonical_basis,
    filter_support,
    implication_closure,
    next_closure,
    read_cxt,
    write_cxt,
)
from .ingest import PassEvent, RawEvent, parse_events, parse_events_file
from .patterns import (
    ConclusionString,
    SearchConfig,
    SimilarityMatch,
    edit_distance_sub2,
    extract_similar,
    similarity_ratio,
    token_sort_ratio,
)
from .pipeline import SearchReport, run_pipeline
from .scaling import BinOverflowError, ScaledAttribute, ScalingConfig, bin_index, scale_context

__all__ = [
    "AnalysisParams",
    "AttributeSet",
    "BinOverflowError",
    "ConclusionString",
    "DatasetPaths",
    "FormalContext",
    "Implication",
    "ImplicationBasis",
    "PassEvent",
    "PipelineConfig",
    "RawEvent",
    "ScaledAttribute",
    "ScalingConfig",
    "SearchConfig",
    "SearchReport",
    "SimilarityMatch",
    "__version__",
    "bin_index",
    "canonical_basis",
    "edit_distance_sub2",
    "extract_similar",
    "filter_support",
    "implication_closure",
    "next_closure",
    "parse_events",
    "parse_events_file",
    "read_cxt",
    "run_pipeline",
    "scale_context",
    "similarity_ratio",
    "token_sort_ratio",
    "write_cxt",
]
