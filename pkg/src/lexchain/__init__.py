"""Lexicographic powers of chains and their fixed points."""
from .chains import (
    EMPTY_MAP,
    ExtBool,
    Fin,
    FinIdx,
    Fix,
    HetProd,
    Kind,
    MapElem,
    Nat,
    Omega,
    OmegaStar,
    Ordering,
    Pow,
    SegLE,
    SegLT,
    StageElem,
    StarIdx,
    TupleElem,
    compare,
    member,
)
from .syntax import format_chain, format_elem, parse_chain, parse_elem

__all__ = [
    "EMPTY_MAP", "ExtBool", "Fin", "FinIdx", "Fix", "HetProd", "Kind", "MapElem", "Nat",
    "Omega", "OmegaStar", "Ordering", "Pow", "SegLE", "SegLT", "StageElem", "StarIdx",
    "TupleElem", "compare", "member", "format_chain", "format_elem", "parse_chain", "parse_elem",
]
