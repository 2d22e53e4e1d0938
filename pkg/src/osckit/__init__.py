"""Solvers and verifiers for zero-scarce solutions of f'' - (e^{lz} + b2 e^{sz} + b3) f = 0."""
from .cnum import CNum, set_precision
from .expalg import ExpPoly
from .solution import EqSpec, SolutionForm

__version__ = "0.1.0"

__all__ = ["CNum", "EqSpec", "ExpPoly", "SolutionForm", "set_precision"]
