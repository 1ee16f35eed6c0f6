"""Histogram scaling of timestamped passes into a binary formal context.

A pass is a many-valued fact (passer, receiver, time).  Scaling discretizes
the time into per-half bins and turns each (receiver, bin) pair into one
binary attribute, so a passer's row records in which part of the half they
reached which teammate.
"""

from __future__ import annotations

import logging
import math
import re
from collections.abc import Iterable
from dataclasses import dataclass

from .fca.context import FormalContext
from .ingest import PassEvent

logger = logging.getLogger(__name__)

_LABEL = re.compile(r"^Bin(\d+)_(.+)$")


class BinOverflowError(ValueError):
    """An event time maps past the last bin under the reject policy."""


@dataclass(frozen=True)
class ScalingConfig:
    bins_per_half: int = 10
    max_minutes: float = 50.0
    overflow_policy: str = "clamp"  # "clamp" or "reject"

    def __post_init__(self) -> None:
        if self.bins_per_half < 1:
            raise ValueError("bins_per_half must be >= 1")
        if self.max_minutes <= 0:
            raise ValueError("max_minutes must be positive")
        if self.overflow_policy not in ("clamp", "reject"):
            raise ValueError(f"unknown overflow policy {self.overflow_policy!r}")

    @property
    def bin_factor(self) -> float:
        return (self.bins_per_half - 1) / self.max_minutes


DEFAULT_SCALING = ScalingConfig()


@dataclass(frozen=True)
class ScaledAttribute:
    """One binary-context column: a receiver reached within a time bin."""

    receiver_id: str
    bin: int

    def label(self) -> str:
        return f"Bin{self.bin}_{self.receiver_id}"

    @classmethod
    def parse(cls, label: str) -> ScaledAttribute:
        m = _LABEL.match(label)
        if m is None:
            raise ValueError(f"not a scaled-attribute label: {label!r}")
        return cls(receiver_id=m.group(2), bin=int(m.group(1)))


def bin_index(event_sec: float, cfg: ScalingConfig = DEFAULT_SCALING) -> int:
    """Bin for an event ``event_sec`` seconds into its half.

    Computes floor((event_sec / 60) * bin_factor); times past the last bin
    are clamped to it or rejected, per the config's overflow policy.
    """
    if event_sec < 0:
        raise ValueError(f"event_sec must be non-negative, got {event_sec}")
    raw = math.floor((event_sec / 60.0) * cfg.bin_factor)
    last = cfg.bins_per_half - 1
    if raw > last:
        if cfg.overflow_policy == "reject":
            raise BinOverflowError(
                f"event at {event_sec}s maps to bin {raw}, past the last bin {last}"
            )
        return last
    return raw


@dataclass(frozen=True)
class ScaleStats:
    pass_count: int
    clamped_events: int


def scale_context_with_stats(
    passes: Iterable[PassEvent],
    cfg: ScalingConfig = DEFAULT_SCALING,
    *,
    name: str | None = None,
) -> tuple[FormalContext, ScaleStats]:
    """Like :func:`scale_context` but also reports how many events clamped."""
    events = sorted(passes, key=lambda p: (p.event_sec, p.event_id))
    if events:
        keys = {(p.match_id, p.period) for p in events}
        if len(keys) > 1:
            raise ValueError(f"passes span several halves: {sorted(keys)}")
        if name is None:
            match_id, period = next(iter(keys))
            name = f"{match_id}_{period}"
    elif name is None:
        name = ""

    clamped = 0
    objects: list[str] = []
    attributes: list[str] = []
    attr_pos: dict[str, int] = {}
    obj_pos: dict[str, int] = {}
    cells: set[tuple[int, int]] = set()
    last = cfg.bins_per_half - 1
    for p in events:
        if p.receiver_id is None:
            raise ValueError(
                f"pass {p.event_id} has no resolved receiver; filter upstream"
            )
        try:
            b = bin_index(p.event_sec, cfg)
        except BinOverflowError:
            raise BinOverflowError(
                f"pass {p.event_id} at {p.event_sec}s overflows the "
                f"{cfg.bins_per_half}-bin scale"
            )
        if cfg.overflow_policy == "clamp" and math.floor((p.event_sec / 60.0) * cfg.bin_factor) > last:
            clamped += 1
        passer = str(p.passer_id)
        label = ScaledAttribute(str(p.receiver_id), b).label()
        if passer not in obj_pos:
            obj_pos[passer] = len(objects)
            objects.append(passer)
        if label not in attr_pos:
            attr_pos[label] = len(attributes)
            attributes.append(label)
        cells.add((obj_pos[passer], attr_pos[label]))

    incidence = [
        [(g, m) in cells for m in range(len(attributes))]
        for g in range(len(objects))
    ]
    if clamped:
        logger.warning("%s: clamped %d event(s) past the last time bin", name or "context", clamped)
    ctx = FormalContext(objects, attributes, incidence, name=name)
    return ctx, ScaleStats(pass_count=len(events), clamped_events=clamped)


def scale_context(
    passes: Iterable[PassEvent],
    cfg: ScalingConfig = DEFAULT_SCALING,
    *,
    name: str | None = None,
) -> FormalContext:
    """Binary context of one match half.

    Objects are the distinct passers and attributes the distinct
    (receiver, bin) labels, both in first-occurrence order after sorting
    events by (event_sec, event_id); repeated passes in the same bin
    collapse into a single incidence.  An empty pass list yields the 0x0
    context.
    """
    ctx, _ = scale_context_with_stats(passes, cfg, name=name)
    return ctx
