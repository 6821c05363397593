"""Finite ortholattice models, valuation semantics and Hilbert proof checking for QL and CL."""

from orthologic.formula import Formula, Neg, Or, Var, expand, parse, render
from orthologic.lattice import MO2, O6, FiniteOrthoLattice, boolean, classify, two
from orthologic.semantics import is_consequence, is_valid, oml_valid, tautology

__all__ = [
    "FiniteOrthoLattice",
    "Formula",
    "MO2",
    "Neg",
    "O6",
    "Or",
    "Var",
    "boolean",
    "classify",
    "expand",
    "is_consequence",
    "is_valid",
    "oml_valid",
    "parse",
    "render",
    "tautology",
    "two",
]
