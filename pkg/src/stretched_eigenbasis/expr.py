"""Tiny arithmetic-expression language for user-defined problem data.

Expressions use ``+ - * / ^`` (``^`` is a power, ``**`` is accepted too),
parentheses, the functions ``sin cos tan exp log sqrt abs atan2``, the
constants ``pi`` and ``e``, and the variables ``x``, ``y``, ``r`` and
``theta``.  They are parsed once with :mod:`ast` and evaluated on numpy
arrays; nothing else from Python is reachable.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass

import numpy as np

from .errors import ContractError

_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "atan2": np.arctan2,
}
CONSTANTS = {"pi": np.pi, "e": np.e}
VARIABLES = ("x", "y", "r", "theta")


def _check(node: ast.AST) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body)
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINARY:
            raise ContractError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.left)
        _check(node.right)
    elif isinstance(node, ast.UnaryOp):
        if type(node.op) not in _UNARY:
            raise ContractError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.operand)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS or node.keywords:
            raise ContractError(f"unknown function in {ast.unparse(node)!r}")
        for arg in node.args:
            _check(arg)
    elif isinstance(node, ast.Name):
        if node.id not in CONSTANTS and node.id not in VARIABLES:
            raise ContractError(f"unknown name {node.id!r}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise ContractError(f"unsupported literal {node.value!r}")
    else:
        raise ContractError(f"unsupported syntax {type(node).__name__}")


def _eval(node: ast.AST, env: dict):
    if isinstance(node, ast.BinOp):
        return _BINARY[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        return _UNARY[type(node.op)](_eval(node.operand, env))
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](*(_eval(a, env) for a in node.args))
    if isinstance(node, ast.Name):
        return CONSTANTS[node.id] if node.id in CONSTANTS else env[node.id]
    return float(node.value)


@dataclass(frozen=True)
class Expression:
    """A parsed expression; call it on (m, 2) points to get m values."""

    source: str

    def __post_init__(self):
        try:
            # Python's ^ binds looser than +; rewrite it to ** for power precedence
            tree = ast.parse(self.source.strip().replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ContractError(f"cannot parse {self.source!r}: {exc.msg}") from None
        _check(tree)
        object.__setattr__(self, "_tree", tree.body)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x = pts[:, 0]
        y = pts[:, 1] if pts.shape[1] > 1 else np.zeros_like(x)
        env = {"x": x, "y": y, "r": np.hypot(x, y), "theta": np.arctan2(y, x)}
        with np.errstate(all="ignore"):
            out = _eval(self._tree, env)
        return np.broadcast_to(np.asarray(out, dtype=float), x.shape).copy()

    def evaluate(self, **variables) -> np.ndarray:
        """Evaluate with variables given by keyword (missing ones are 0)."""
        arrays = {name: np.asarray(variables.get(name, 0.0), dtype=float) for name in VARIABLES}
        shape = np.broadcast_shapes(*(a.shape for a in arrays.values()))
        with np.errstate(all="ignore"):
            out = _eval(self._tree, arrays)
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy()


def parse(source: str) -> Expression:
    return Expression(source)
