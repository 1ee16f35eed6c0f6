"""Attribute implications and the Duquenne-Guigues canonical basis.

The basis is computed with Ganter's NextClosure enumeration run over the
implication-saturation closure: premises are visited in lectic order, each
non-closed one is emitted as an implication whose conclusion is its context
closure, and the growing rule list itself drives the enumeration.  The
lectic order is the one induced by ascending attribute index, so results
are reproducible for a fixed attribute ordering.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .context import AttributeSet, FormalContext


@dataclass(frozen=True)
class Implication:
    """An attribute implication premise -> conclusion with its support.

    Conclusions are stored as full closures, so the premise is always
    contained in the conclusion.  Support counts the objects whose row
    contains the premise.
    """

    premise: AttributeSet
    conclusion: AttributeSet
    support: int = 0

    def __post_init__(self) -> None:
        if not self.premise.issubset(self.conclusion):
            raise ValueError("implication premise must be contained in its conclusion")
        if self.support < 0:
            raise ValueError("implication support must be non-negative")

    def proper_conclusion(self) -> AttributeSet:
        """Conclusion with the premise attributes subtracted (display form)."""
        return self.conclusion - self.premise


@dataclass(frozen=True)
class ImplicationBasis:
    """An ordered list of implications tied to the context it came from."""

    implications: tuple[Implication, ...] = ()
    context_id: str = ""

    def __iter__(self):
        return iter(self.implications)

    def __len__(self) -> int:
        return len(self.implications)

    def __getitem__(self, i: int) -> Implication:
        return self.implications[i]


def _rule_index(
    implications: Iterable[Implication],
) -> tuple[dict[int, int], list[tuple[int, int]]]:
    """Split rules into a singleton-premise lookup and the remaining list."""
    singles: dict[int, int] = {}
    multis: list[tuple[int, int]] = []
    for imp in implications:
        p, c = imp.premise.mask, imp.conclusion.mask
        if p.bit_count() == 1:
            singles[p] = singles.get(p, 0) | c
        else:
            multis.append((p, c))
    return singles, multis


def _saturate(
    mask: int,
    singles: dict[int, int],
    multis: Sequence[tuple[int, int]],
    abort_mask: int = 0,
) -> int | None:
    """Fixpoint of applying every rule P -> C whenever P is a subset.

    Returns None as soon as a bit of ``abort_mask`` is added; callers use
    that to discard lectic candidates without finishing the fixpoint.
    """
    cur = mask
    todo = cur  # bits whose singleton rules have not fired yet
    while True:
        while todo:
            low = todo & -todo
            todo ^= low
            c = singles.get(low)
            if c is not None:
                add = c & ~cur
                if add:
                    cur |= add
                    if cur & abort_mask:
                        return None
                    todo |= add
        progressed = False
        for p, c in multis:
            if not p & ~cur:
                add = c & ~cur
                if add:
                    cur |= add
                    if cur & abort_mask:
                        return None
                    todo |= add
                    progressed = True
        if not progressed and not todo:
            return cur


def implication_closure(
    attrs: AttributeSet,
    implications: Iterable[Implication],
) -> AttributeSet:
    """Smallest superset of ``attrs`` closed under every implication."""
    singles, multis = _rule_index(implications)
    result = _saturate(attrs.mask, singles, multis)
    assert result is not None
    return AttributeSet(result)


def next_closure(
    ctx: FormalContext,
    current: AttributeSet | None,
    closure_op: Callable[[AttributeSet], AttributeSet] | None = None,
) -> AttributeSet | None:
    """Lectically next closed set of ``closure_op`` after ``current``.

    ``current`` must itself be closed; pass None to obtain the first closed
    set, the closure of the empty set.  Returns None once the full attribute
    set has been passed.  ``closure_op`` defaults to the context closure.
    """
    op = closure_op if closure_op is not None else ctx.closure
    if current is None:
        return op(AttributeSet(0))
    ctx._check_attr_mask(current.mask)
    a = current.mask
    for i in range(len(ctx.attributes) - 1, -1, -1):
        bit = 1 << i
        if a & bit:
            a &= ~bit
        else:
            b = op(AttributeSet(a | bit)).mask
            if not b & ~a & (bit - 1):
                return AttributeSet(b)
    return None


def _next_preclosed(
    current: int,
    n: int,
    singles: dict[int, int],
    multis: Sequence[tuple[int, int]],
) -> int:
    """NextClosure step over the rule-saturation closure, on raw masks."""
    a = current
    for i in range(n - 1, -1, -1):
        bit = 1 << i
        if a & bit:
            a &= ~bit
        else:
            # candidate fails the lectic test iff saturation adds a bit
            # below i that current does not already have
            b = _saturate(a | bit, singles, multis, abort_mask=(bit - 1) & ~a)
            if b is not None:
                return b
    raise AssertionError("no lectic successor found below the full attribute set")


def canonical_basis(ctx: FormalContext) -> ImplicationBasis:
    """The Duquenne-Guigues basis of ``ctx``.

    Emits one implication P -> closure(P) per pseudo-intent P, in the lectic
    order the premises are discovered.  The result is sound and complete for
    the context's implication theory and minimal in cardinality.
    """
    n = len(ctx.attributes)
    full = (1 << n) - 1
    singles: dict[int, int] = {}
    multis: list[tuple[int, int]] = []
    found: list[Implication] = []
    a = 0  # saturation of the empty set under an empty rule list
    while True:
        cl = ctx._closure_mask(a)
        if cl != a:
            found.append(
                Implication(AttributeSet(a), AttributeSet(cl), ctx._support(a))
            )
            if a.bit_count() == 1:
                singles[a] = cl
            else:
                multis.append((a, cl))
        if a == full:
            break
        a = _next_preclosed(a, n, singles, multis)
    return ImplicationBasis(tuple(found), context_id=ctx.name)


def filter_support(basis: ImplicationBasis, min_support: int) -> ImplicationBasis:
    """Implications of ``basis`` with support >= ``min_support``, order kept.

    ``min_support`` must be at least 1; 0 would be a silent no-op and is
    rejected as a configuration mistake.
    """
    if min_support < 1:
        raise ValueError(f"min_support must be >= 1, got {min_support}")
    kept = tuple(imp for imp in basis if imp.support >= min_support)
    return ImplicationBasis(kept, context_id=basis.context_id)
