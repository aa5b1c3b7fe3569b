"""Core package"""

from .syntax import Program, SymbolicHeap, VarSet
from .analysis import ParallelismAnalyzer, Summaries, VariableAnalyzer

__all__ = [
    "Program",
    "SymbolicHeap",
    "VarSet",
    "Summaries",
    "VariableAnalyzer",
    "ParallelismAnalyzer",
]
