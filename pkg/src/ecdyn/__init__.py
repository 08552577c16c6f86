"""Cycles and trees of the x-coordinate map of an elliptic curve endomorphism over a finite field."""

from .curve import Curve, EndoMap, count_points, e0_set, make_endo, validate_endo_rep
from .dynamics import FunctionalGraph, build_graph, cycle_census, export_dot, tree_profile
from .ff import FieldDesc, FieldElem, Poly, fld_make
from .predictor import StructureReport, predict, reconcile
from .quadorder import QuadInt, factor_principal, frobenius_rep

__all__ = [
    "Curve",
    "EndoMap",
    "FieldDesc",
    "FieldElem",
    "FunctionalGraph",
    "Poly",
    "QuadInt",
    "StructureReport",
    "build_graph",
    "count_points",
    "cycle_census",
    "e0_set",
    "export_dot",
    "factor_principal",
    "fld_make",
    "frobenius_rep",
    "make_endo",
    "predict",
    "reconcile",
    "tree_profile",
    "validate_endo_rep",
]

__version__ = "0.1.0"
