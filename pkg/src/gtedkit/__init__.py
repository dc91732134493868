"""Semantic similarity of formal theorem statements via generalized tree edit distance."""

from .evalkit import ConfusionMatrix, MetricReport, bleu, confusion, identity_match, report, sweep
from .gted import (
    DecisionConfig,
    GeneralizedTransformation,
    SpecialTransformation,
    TransformationSet,
    alpha_transformation,
    decide,
    gted_distance,
    similarity,
)
from .opt import OperatorTree, OptNode, build_opt, quotient, render
from .parser import ParseError, parse_theorem, tokenize
from .standardize import StandardizeConfig, standardize
from .ted import UnitCostModel, ted_bruteforce, ted_distance

__all__ = [
    "ConfusionMatrix", "DecisionConfig", "GeneralizedTransformation", "MetricReport", "OperatorTree",
    "OptNode", "ParseError", "SpecialTransformation", "StandardizeConfig", "TransformationSet",
    "UnitCostModel", "alpha_transformation", "bleu", "build_opt", "confusion", "decide", "gted_distance",
    "identity_match", "parse_theorem", "quotient", "render", "report", "similarity", "standardize", "sweep",
    "ted_bruteforce", "ted_distance", "tokenize",
]
