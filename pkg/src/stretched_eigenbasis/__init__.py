"""Collocation solvers for elliptic problems in a sine eigenbasis on a stretched box."""

from __future__ import annotations

from .assembly import LinearSystem, ProblemSpec, SpectralSolution, assemble, solve, solve_problem
from .eigenbasis import BasisSet, ExtendedRectangle, eval_basis, eval_expansion
from .errors import ContractError, DomainError, SingularSystemError
from .expr import Expression
from .geometry import BoundaryCurve, CollocationGrid, Tag, classify, fit_to_curve, relocate, uniform_grid
from .problems import Problem, catalog, get_entry, get_problem, problem_from_config

__all__ = [
    "BasisSet", "BoundaryCurve", "CollocationGrid", "ContractError", "DomainError", "Expression",
    "ExtendedRectangle", "LinearSystem", "Problem", "ProblemSpec", "SingularSystemError", "SpectralSolution",
    "Tag", "assemble", "catalog", "classify", "eval_basis", "eval_expansion", "fit_to_curve", "get_entry",
    "get_problem", "problem_from_config", "relocate", "solve", "solve_problem", "uniform_grid",
]
