"""Γ-loops, Bruck loops and the finite loop tools around them."""

from .constructions import (ConstructionResult, bruck_from_gamma, bruck_from_group,
                            gamma_from_bruck, gamma_from_bruck_via_translations,
                            gamma_from_group, round_trip_report)
from .errors import ClosureIncomplete, ConsistencyError, LoopInputError, PreconditionError
from .groups import GroupSpec, build_group, corpus
from .perm import Permutation, PermGroup, closure, is_twisted_subset
from .report import Report, VarietyReport
from .search import SearchSpec, search_loops
from .table import CayleyTable, is_isomorphic, read_loop, validate_loop, write_loop
from .terms import parse_identity, verify_identity
from .varieties import check_automorphic, check_bol_bruck, check_gamma

__all__ = [
    "CayleyTable", "ClosureIncomplete", "ConsistencyError", "ConstructionResult", "GroupSpec",
    "LoopInputError", "PermGroup", "Permutation", "PreconditionError", "Report", "SearchSpec",
    "VarietyReport", "bruck_from_gamma", "bruck_from_group", "build_group", "check_automorphic",
    "check_bol_bruck", "check_gamma", "closure", "corpus", "gamma_from_bruck",
    "gamma_from_bruck_via_translations", "gamma_from_group", "is_isomorphic", "is_twisted_subset",
    "parse_identity", "read_loop", "round_trip_report", "search_loops", "validate_loop",
    "verify_identity", "write_loop",
]
