"""Fuzzy search over stringified implication conclusions.

Each implication conclusion becomes a canonical space-joined string of
attribute labels; an index half's conclusion strings are then matched
against target halves' strings with a token-sort similarity ratio.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .fca.context import AttributeSet, FormalContext


@dataclass(frozen=True)
class SearchConfig:
    score_cutoff: int = 75
    limit: int = 10

    def __post_init__(self) -> None:
        if not 0 <= self.score_cutoff <= 100:
            raise ValueError(f"score_cutoff must be in [0, 100], got {self.score_cutoff}")
        if self.limit < 1:
            raise ValueError(f"limit must be >= 1, got {self.limit}")


DEFAULT_SEARCH = SearchConfig()


@dataclass(frozen=True)
class ConclusionString:
    """Canonical text of one conclusion: deduplicated labels in byte order."""

    text: str
    source: tuple[int, str, int] | None = None   # (match_id, period, implication index)


@dataclass(frozen=True)
class SimilarityMatch:
    query: ConclusionString
    target: ConclusionString
    ratio: int


def stringify_labels(labels: Iterable[str]) -> str:
    return " ".join(sorted(set(labels)))


def stringify_conclusion(
    concl: AttributeSet,
    ctx: FormalContext,
    source: tuple[int, str, int] | None = None,
) -> ConclusionString:
    """Space-joined conclusion labels, deduplicated and byte-order sorted."""
    return ConclusionString(text=stringify_labels(ctx.attribute_labels(concl)), source=source)


def edit_distance_sub2(a: str, b: str) -> int:
    """Minimum edit cost with insertion 1, deletion 1, substitution 2.

    Under these costs the distance equals len(a) + len(b) - 2 * LCS(a, b),
    so a bit-parallel longest-common-subsequence scan does the work.
    """
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    return len(a) + len(b) - 2 * _lcs_length(a, b)


def _lcs_length(a: str, b: str) -> int:
    # Bit-parallel row update; Python ints give an unbounded word size.
    m = len(a)
    mask = (1 << m) - 1
    pm: dict[str, int] = {}
    bit = 1
    for ch in a:
        pm[ch] = pm.get(ch, 0) | bit
        bit <<= 1
    v = mask
    for ch in b:
        u = v & pm.get(ch, 0)
        v = ((v + u) | (v - u)) & mask
    return m - v.bit_count()


def similarity_ratio(a: str, b: str) -> int:
    """Normalized similarity in [0, 100], rounded half up.

    round(100 * (L - d) / L) for L = len(a) + len(b) and d the
    substitution-cost-2 edit distance; two empty strings score 100.
    """
    total = len(a) + len(b)
    if total == 0:
        return 100
    d = edit_distance_sub2(a, b)
    return (200 * (total - d) + total) // (2 * total)


def normalize_tokens(s: str) -> str:
    """Whitespace tokens sorted ascending by byte order, space-joined."""
    return " ".join(sorted(s.split()))


def token_sort_ratio(a: str, b: str) -> int:
    """similarity_ratio of the two token-normalized strings."""
    return similarity_ratio(normalize_tokens(a), normalize_tokens(b))


def extract_similar(
    query: ConclusionString,
    choices: Sequence[ConclusionString],
    cfg: SearchConfig = DEFAULT_SEARCH,
) -> list[SimilarityMatch]:
    """Choices scoring at least the cutoff against the query.

    Sorted descending by ratio with ties in input order, truncated to the
    configured limit.
    """
    qn = normalize_tokens(query.text)
    qlen = len(qn)
    kept: list[SimilarityMatch] = []
    for choice in choices:
        cn = normalize_tokens(choice.text)
        total = len(cn) + qlen
        if total:
            # Distance is at least the length gap, capping the ratio.
            best = (400 * min(qlen, len(cn)) + total) // (2 * total)
            if best < cfg.score_cutoff:
                continue
        ratio = similarity_ratio(qn, cn)
        if ratio >= cfg.score_cutoff:
            kept.append(SimilarityMatch(query=query, target=choice, ratio=ratio))
    kept.sort(key=lambda m: -m.ratio)
    return kept[: cfg.limit]
