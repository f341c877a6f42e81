"""Exact tools for L-intersecting families of sets and subspaces.

Closed-form bounds with full hypothesis checking, the structural lemmas
as executable checks, and a certified maximum-family search backed by a
compiled kernel (with a pure-Python fallback).
"""

from ._backend import BACKEND, available_backends
from .arith import binom, qbinom
from .family import FamilyError, KSet, LSet, ParseError, SetFamily, parse_family, serialize_family
from .search import SearchResult, SearchSpec, construct_extremal, max_family
from .theorems import TheoremId, TheoremReport, Verdict, apply_theorem

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "binom",
    "qbinom",
    "FamilyError",
    "ParseError",
    "LSet",
    "KSet",
    "SetFamily",
    "parse_family",
    "serialize_family",
    "SearchSpec",
    "SearchResult",
    "max_family",
    "construct_extremal",
    "TheoremId",
    "TheoremReport",
    "Verdict",
    "apply_theorem",
]
