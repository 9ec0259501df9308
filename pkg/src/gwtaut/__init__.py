"""Reduction of genus-one relative Gromov-Witten push-forwards to tautological presentations."""

from .brackets import BaseAtom, BracketTerm, ClassExpr, Glue, Insertion, bracket, canonicalize
from .parse import ParseError, parse
from .reducer import Reducer, ReducerConfig, reduce

__all__ = ["BaseAtom", "BracketTerm", "ClassExpr", "Glue", "Insertion", "ParseError", "Reducer",
           "ReducerConfig", "bracket", "canonicalize", "parse", "reduce"]
