"""Arithmetic expression grammar for user-supplied formulas.

Expressions may use +, -, *, /, ** (or ^), sqrt, pi, numbers and a fixed set of
variable names; domain charts additionally get sin and cos. Anything else
(other function calls, attribute access, unknown names) is rejected before
sympy evaluates the text.
"""

from __future__ import annotations

import io
import tokenize
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from unit_field_lab.errors import ConfigurationError

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_UNICODE = {"√": "sqrt", "×": "*", "÷": "/", "−": "-", "²": "**2"}
_BUILTINS = {"sqrt": sp.sqrt, "pi": sp.pi}
# trigonometry is only offered to domain charts
CHART_FUNCTIONS = {"sin": sp.sin, "cos": sp.cos}


def _normalize(text: str) -> str:
    for old, new in _UNICODE.items():
        text = text.replace(old, new)
    return text.strip()


def _check_tokens(text: str, names: Sequence[str], functions: Mapping[str, object]) -> None:
    allowed = set(names) | set(_BUILTINS) | set(functions)
    try:
        tokens = list(tokenize.generate_tokens(io.StringIO(text).readline))
    except (tokenize.TokenError, IndentationError) as e:
        raise ConfigurationError(f"Cannot tokenize expression '{text}': {e}") from e
    for tok in tokens:
        if tok.type == tokenize.ERRORTOKEN and tok.string.strip():
            raise ConfigurationError(f"Unexpected character '{tok.string}' in '{text}'")
        if tok.type == tokenize.NAME and tok.string not in allowed:
            available = ", ".join(sorted(allowed))
            raise ConfigurationError(f"Unknown name '{tok.string}' in '{text}'. Available: {available}")
        if tok.type == tokenize.OP and tok.string not in {"+", "-", "*", "/", "**", "^", "(", ")"}:
            raise ConfigurationError(f"Operator '{tok.string}' not allowed in '{text}'")


def parse_expressions(
    texts: Sequence[str], names: Sequence[str], functions: Optional[Mapping[str, object]] = None
) -> List[sp.Expr]:
    functions = dict(functions or {})
    symbols = {name: sp.Symbol(name, real=True) for name in names}
    local_dict: Dict[str, object] = {**symbols, **_BUILTINS, **functions}
    exprs = []
    for raw in texts:
        text = _normalize(raw)
        if not text:
            raise ConfigurationError("Empty expression")
        _check_tokens(text, names, functions)
        try:
            expr = parse_expr(text, local_dict=local_dict, transformations=_TRANSFORMATIONS)
        except (SyntaxError, TypeError, sp.SympifyError) as e:
            raise ConfigurationError(f"Invalid expression '{raw}': {e}") from e
        used = {type(f).__name__ for f in expr.atoms(sp.Function)} - set(functions)
        if used:
            raise ConfigurationError(f"Functions {sorted(used)} not allowed in '{raw}'")
        exprs.append(sp.sympify(expr))
    return exprs


def vectorize(exprs: Sequence[sp.Expr], names: Sequence[str]) -> Callable[[np.ndarray], np.ndarray]:
    """Compile expressions into a numpy map (..., len(names)) -> (..., len(exprs))."""
    symbols = [sp.Symbol(name, real=True) for name in names]
    compiled = [sp.lambdify(symbols, expr, modules="numpy") for expr in exprs]

    def evaluate(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        columns = [x[..., i] for i in range(len(names))]
        values = [np.broadcast_to(np.asarray(fn(*columns), dtype=float), x.shape[:-1]) for fn in compiled]
        return np.stack(values, axis=-1)

    return evaluate


def vectorize_jacobian(exprs: Sequence[sp.Expr], names: Sequence[str]) -> Callable[[np.ndarray], np.ndarray]:
    """Symbolic Jacobian compiled to a map (..., len(names)) -> (..., len(exprs), len(names))."""
    symbols = [sp.Symbol(name, real=True) for name in names]
    matrix = sp.Matrix(list(exprs)).jacobian(symbols)
    rows, cols = matrix.shape
    flat = vectorize([matrix[i, j] for i in range(rows) for j in range(cols)], names)

    def evaluate(x: np.ndarray) -> np.ndarray:
        values = flat(x)
        return values.reshape(values.shape[:-1] + (rows, cols))

    return evaluate


def coordinate_names(n: int) -> List[str]:
    return [f"x{i + 1}" for i in range(n)]


def read_expression_lines(path: str) -> List[str]:
    """Non-empty, non-comment lines of an expression file."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [line.split("#", 1)[0].strip() for line in fh]
    except OSError as e:
        raise ConfigurationError(f"Cannot read expression file {path}: {e}") from e
    return [line for line in lines if line]
