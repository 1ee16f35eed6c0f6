"""Reading and writing formal contexts and implication bases.

Contexts use the Burmeister CXT layout: a "B" header line, a blank line,
the object and attribute counts, a blank line, the object names, the
attribute names, then one '.'/'X' row per object.  Writing is byte-exact
and reading is strict, so a written file always parses back to an equal
context.
"""

from __future__ import annotations

import csv
import io as _io
import json
import re
from pathlib import Path

from .context import AttributeSet, FormalContext
from .implications import Implication, ImplicationBasis


class CxtFormatError(ValueError):
    """Raised when a CXT document does not follow the expected layout."""


def _byte_order(label: str) -> bytes:
    return label.encode("utf-8")


def write_cxt(ctx: FormalContext) -> str:
    lines = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
    lines.extend(ctx.objects)
    lines.extend(ctx.attributes)
    n = len(ctx.attributes)
    for g in range(len(ctx.objects)):
        row = ctx.row(g)
        lines.append("".join("X" if m in row else "." for m in range(n)))
    return "\n".join(lines) + "\n"


def read_cxt(text: str) -> FormalContext:
    if not text.endswith("\n"):
        raise CxtFormatError("CXT document must be newline-terminated")
    lines = text.split("\n")[:-1]
    if len(lines) < 5:
        raise CxtFormatError("CXT document too short")
    if lines[0] != "B":
        raise CxtFormatError(f"expected 'B' header, got {lines[0]!r}")
    if lines[1] != "":
        raise CxtFormatError("expected blank line after header")
    try:
        n_objects = int(lines[2])
        n_attributes = int(lines[3])
    except ValueError:
        raise CxtFormatError("object/attribute counts must be integers")
    if n_objects < 0 or n_attributes < 0:
        raise CxtFormatError("object/attribute counts must be non-negative")
    if lines[4] != "":
        raise CxtFormatError("expected blank line after counts")
    expected = 5 + n_objects + n_attributes + n_objects
    if len(lines) != expected:
        raise CxtFormatError(f"expected {expected} lines, got {len(lines)}")
    objects = lines[5:5 + n_objects]
    attributes = lines[5 + n_objects:5 + n_objects + n_attributes]
    incidence = []
    for g, row in enumerate(lines[5 + n_objects + n_attributes:]):
        if len(row) != n_attributes or set(row) - {".", "X"}:
            raise CxtFormatError(f"invalid incidence row {g}: {row!r}")
        incidence.append([c == "X" for c in row])
    try:
        return FormalContext(objects, attributes, incidence)
    except ValueError as e:
        raise CxtFormatError(str(e)) from e


def write_cxt_file(ctx: FormalContext, path: str | Path) -> None:
    Path(path).write_text(write_cxt(ctx), encoding="utf-8")


def read_cxt_file(path: str | Path) -> FormalContext:
    return read_cxt(Path(path).read_text(encoding="utf-8"))


def write_context_csv(ctx: FormalContext) -> str:
    """0/1 matrix with attribute labels as header and object labels in column 1."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(ctx.attributes))
    n = len(ctx.attributes)
    for g, obj in enumerate(ctx.objects):
        row = ctx.row(g)
        writer.writerow([obj] + [1 if m in row else 0 for m in range(n)])
    return buf.getvalue()


# -- implication basis ----------------------------------------------------

_BASIS_LINE = re.compile(r"^(?P<premise>.*?)\s*->\s*(?P<conclusion>.*?)\s*\[support=(?P<support>\d+)\]$")


def _side_labels(attrs: AttributeSet, ctx: FormalContext) -> list[str]:
    return sorted(ctx.attribute_labels(attrs), key=_byte_order)


def format_basis_text(basis: ImplicationBasis, ctx: FormalContext) -> str:
    """One implication per line, labels ascending within each side."""
    lines = []
    for imp in basis:
        parts = _side_labels(imp.premise, ctx)
        parts.append("->")
        parts.extend(_side_labels(imp.conclusion, ctx))
        parts.append(f"[support={imp.support}]")
        lines.append(" ".join(parts))
    return "".join(line + "\n" for line in lines)


def parse_basis_text(text: str, ctx: FormalContext) -> ImplicationBasis:
    imps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        m = _BASIS_LINE.match(line)
        if m is None:
            raise ValueError(f"line {lineno}: not an implication line: {line!r}")
        premise = ctx.attribute_set(*m.group("premise").split())
        conclusion = ctx.attribute_set(*m.group("conclusion").split())
        imps.append(Implication(premise, conclusion, int(m.group("support"))))
    return ImplicationBasis(tuple(imps), context_id=ctx.name)


def basis_to_records(basis: ImplicationBasis, ctx: FormalContext) -> list[dict]:
    """JSON-ready records with premise/conclusion label lists and support."""
    return [
        {
            "premise": _side_labels(imp.premise, ctx),
            "conclusion": _side_labels(imp.conclusion, ctx),
            "support": imp.support,
        }
        for imp in basis
    ]


def basis_from_records(records: list[dict], ctx: FormalContext) -> ImplicationBasis:
    imps = []
    for rec in records:
        if not isinstance(rec, dict):
            raise ValueError(f"implication record must be an object, got {type(rec).__name__}")
        try:
            imps.append(
                Implication(
                    ctx.attribute_set(*rec["premise"]),
                    ctx.attribute_set(*rec["conclusion"]),
                    int(rec["support"]),
                )
            )
        except KeyError as e:
            raise ValueError(f"implication record missing key {e.args[0]!r}") from e
    return ImplicationBasis(tuple(imps), context_id=ctx.name)


def format_basis_json(basis: ImplicationBasis, ctx: FormalContext) -> str:
    return json.dumps(basis_to_records(basis, ctx), indent=2) + "\n"


def parse_basis_json(text: str, ctx: FormalContext) -> ImplicationBasis:
    records = json.loads(text)
    if not isinstance(records, list):
        raise ValueError(f"basis JSON must be an array, got {type(records).__name__}")
    return basis_from_records(records, ctx)
