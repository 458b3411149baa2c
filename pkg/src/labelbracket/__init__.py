"""State-sum label brackets of knotted trivalent graph diagrams."""

from .diagram import GraphDiagram, ValidationReport, load_diagram, dump_diagram, validate_diagram
from .engine import Equal, Trace, Unknown, equivalent, normalize
from .laurent import Laurent, NotDivisible, RingMismatch
from .moves import (KINDS, VARIANTS, Certified, MoveInstance, apply_move, certify_invariance,
                    enumerate_move_sites, load_corpus, sweep)
from .planar import PlanarMap, parse_map, format_map
from .rules import RuleSet, bundled_rules, load_ruleset, parse_ruleset
from .statesum import BracketResult, RulesetIncomplete, bracket, enumerate_states, resolve_state, state_sum
from .sums import FormalSum

__all__ = [
    "GraphDiagram", "ValidationReport", "load_diagram", "dump_diagram", "validate_diagram",
    "Equal", "Trace", "Unknown", "equivalent", "normalize",
    "Laurent", "NotDivisible", "RingMismatch",
    "KINDS", "VARIANTS", "Certified", "MoveInstance", "apply_move", "certify_invariance",
    "enumerate_move_sites", "load_corpus", "sweep",
    "PlanarMap", "parse_map", "format_map",
    "RuleSet", "bundled_rules", "load_ruleset", "parse_ruleset",
    "BracketResult", "RulesetIncomplete", "bracket", "enumerate_states", "resolve_state", "state_sum",
    "FormalSum",
]
