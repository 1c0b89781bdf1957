"""Toolkit for modal team logics with inclusion atoms and might operators."""
from .kripke import KripkeModel, disjoint_union, enumerate_successor_teams, image, preimage
from .semantics import EvalContext, eval_classical_world, eval_team, max_sat_subteam
from .syntax import Logic, modal_depth, parse_formula, print_formula

__all__ = [
    "EvalContext",
    "KripkeModel",
    "Logic",
    "disjoint_union",
    "enumerate_successor_teams",
    "eval_classical_world",
    "eval_team",
    "image",
    "max_sat_subteam",
    "modal_depth",
    "parse_formula",
    "preimage",
    "print_formula",
]
