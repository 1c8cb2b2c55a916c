"""Positive reliances and restraints between existential rules."""

from .engine import AnalysisOptions, AnalysisReport, compute_reliances
from .graph import DependencyGraph, Verdict, is_core_stratified, is_positive_acyclic
from .mfa import MfaVerdict, is_mfa, mfa_by_components
from .model import Atom, Rule, Term, atom, const, null, var
from .parser import ParseError, RuleSet, load_rules, parse_rules
from .positive import positively_relies
from .restraint import restrains

__all__ = [
    "AnalysisOptions",
    "AnalysisReport",
    "Atom",
    "DependencyGraph",
    "MfaVerdict",
    "ParseError",
    "Rule",
    "RuleSet",
    "Term",
    "Verdict",
    "atom",
    "compute_reliances",
    "const",
    "is_core_stratified",
    "is_mfa",
    "is_positive_acyclic",
    "load_rules",
    "mfa_by_components",
    "null",
    "parse_rules",
    "positively_relies",
    "restrains",
    "var",
]
