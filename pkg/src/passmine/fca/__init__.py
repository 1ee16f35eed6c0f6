"""Formal concept analysis core: contexts, closures, canonical basis."""

from .context import AttributeSet, FormalContext
from .implications import (
    Implication,
    ImplicationBasis,
    canonical_basis,
    filter_support,
    implication_closure,
    next_closure,
)
from .io import (
    CxtFormatError,
    basis_from_records,
    basis_to_records,
    format_basis_json,
    format_basis_text,
    parse_basis_json,
    parse_basis_text,
    read_cxt,
    read_cxt_file,
    write_context_csv,
    write_cxt,
    write_cxt_file,
)

__all__ = [
    "AttributeSet",
    "FormalContext",
    "Implication",
    "ImplicationBasis",
    "canonical_basis",
    "filter_support",
    "implication_closure",
    "next_closure",
    "CxtFormatError",
    "read_cxt",
    "read_cxt_file",
    "write_cxt",
    "write_cxt_file",
    "write_context_csv",
    "format_basis_text",
    "parse_basis_text",
    "format_basis_json",
    "parse_basis_json",
    "basis_to_records",
    "basis_from_records",
]
