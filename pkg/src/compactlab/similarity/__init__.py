"""Amplitude-width-velocity relations derived from an equation without solving it."""

from compactlab.similarity.classify import QualitativeReport, classify
from compactlab.similarity.display import relation_text, width_text
from compactlab.similarity.ledger import LedgerEntry, ledger_for, reference_ledger
from compactlab.similarity.relation import (
    Branch,
    ScalingMonomial,
    SimilarityRelation,
    branches,
    build_relation,
    format_branch,
    parse_branch,
    scale_term,
)
from compactlab.similarity.solve import WidthSolution, scan_roots, solve_width
from compactlab.similarity.sweep import CurveTable, level_crossings, sweep, sweep_law

__all__ = [
    "Branch",
    "CurveTable",
    "LedgerEntry",
    "QualitativeReport",
    "ScalingMonomial",
    "SimilarityRelation",
    "WidthSolution",
    "branches",
    "build_relation",
    "classify",
    "format_branch",
    "ledger_for",
    "level_crossings",
    "parse_branch",
    "reference_ledger",
    "relation_text",
    "scale_term",
    "scan_roots",
    "solve_width",
    "sweep",
    "sweep_law",
    "width_text",
]
