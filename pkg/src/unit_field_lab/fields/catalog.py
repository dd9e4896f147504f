"""Catalog of unit vector fields: Hopf flows, the v_λ family and user formulas."""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from unit_field_lab.errors import ConfigurationError
from unit_field_lab.fields.expressions import (
    coordinate_names,
    parse_expressions,
    read_expression_lines,
    vectorize,
    vectorize_jacobian,
)
from unit_field_lab.fields.schema import FieldDefinition
from unit_field_lab.geometry import SphereDim, complex_structure, inner
from unit_field_lab.log import get_logger

logger = get_logger(__name__)


def hopf(dim: SphereDim) -> FieldDefinition:
    """H(x) = i·x under R^{2k+2} ≅ C^{k+1}."""
    j = complex_structure(dim)

    def formula(x: np.ndarray) -> np.ndarray:
        return x @ j.T

    def jacobian(x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(j, x.shape[:-1] + j.shape)

    return FieldDefinition(dim=dim, formula=formula, exact_jacobian=jacobian, label=f"hopf(k={dim.k})")


def is_hopf(f: FieldDefinition) -> bool:
    """True for catalog Hopf flows, including v_λ at λ = 1."""
    return f.label == f"hopf(k={f.dim.k})"


def lambda_field(lam: float, exact: bool = True) -> FieldDefinition:
    """v_λ(x, y, z, w) = (-λy, λx, -w, z) / sqrt(1 + (λ² - 1)(x² + y²)) on S³."""
    lam = float(lam)
    if not np.isfinite(lam) or lam < 1.0:
        raise ConfigurationError(f"lambda must be >= 1, got {lam}")
    du = np.array(
        [
            [0.0, -lam, 0.0, 0.0],
            [lam, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )
    c = lam**2 - 1.0

    def formula(x: np.ndarray) -> np.ndarray:
        denom = np.sqrt(1.0 + c * (x[..., 0] ** 2 + x[..., 1] ** 2))
        return (x @ du.T) / denom[..., None]

    def jacobian(x: np.ndarray) -> np.ndarray:
        denom = np.sqrt(1.0 + c * (x[..., 0] ** 2 + x[..., 1] ** 2))
        u = x @ du.T
        grad = np.zeros_like(x)
        grad[..., 0] = c * x[..., 0] / denom
        grad[..., 1] = c * x[..., 1] / denom
        return du / denom[..., None, None] - u[..., :, None] * grad[..., None, :] / (denom**2)[..., None, None]

    label = "hopf(k=1)" if lam == 1.0 else f"lambda({lam:.15g})"
    return FieldDefinition(dim=SphereDim(1), formula=formula, exact_jacobian=jacobian if exact else None, label=label)


def custom_field(lines: Sequence[str], label: str = "custom", exact: bool = True) -> FieldDefinition:
    """Field from 2k+2 ambient component expressions in x1, ..., x_{2k+2}.

    The raw formula W is projected onto the tangent space and normalized at
    evaluation; the Jacobian of that composite is propagated exactly from the
    symbolic Jacobian of W.
    """
    n = len(lines)
    try:
        dim = SphereDim.from_ambient(n)
    except ValueError as e:
        raise ConfigurationError(f"Custom field needs 2k+2 component lines (k=1..3), got {n}") from e
    names = coordinate_names(n)
    exprs = parse_expressions(lines, names)
    raw = vectorize(exprs, names)
    raw_jacobian = vectorize_jacobian(exprs, names)

    def _tangent(x: np.ndarray):
        w = raw(x)
        wx = inner(w, x)
        u = w - wx[..., None] * x
        return w, wx, u, np.linalg.norm(u, axis=-1)

    def formula(x: np.ndarray) -> np.ndarray:
        _, _, u, norm = _tangent(x)
        return u / norm[..., None]

    def jacobian(x: np.ndarray) -> np.ndarray:
        w, wx, u, norm = _tangent(x)
        jw = raw_jacobian(x)
        eye = np.eye(n)
        ju = jw - x[..., :, None] * (np.einsum("...l,...lj->...j", x, jw) + w)[..., None, :] - wx[..., None, None] * eye
        v = u / norm[..., None]
        return (eye - v[..., :, None] * v[..., None, :]) @ ju / norm[..., None, None]

    logger.info(
        f"Parsed custom field '{label}'",
        extra={"extra_data": {"k": dim.k, "components": [str(e) for e in exprs]}},
    )
    return FieldDefinition(dim=dim, formula=formula, exact_jacobian=jacobian if exact else None, label=label)


def custom_field_from_file(path: str) -> FieldDefinition:
    return custom_field(read_expression_lines(path), label=f"custom({path})")


def _hopf_builder(arg: Optional[str], dim: Optional[SphereDim]) -> FieldDefinition:
    if arg:
        raise ConfigurationError(f"'hopf' takes no argument, got '{arg}'")
    return hopf(dim or SphereDim(1))


def _lambda_builder(arg: Optional[str], dim: Optional[SphereDim]) -> FieldDefinition:
    if dim is not None and dim.k != 1:
        raise ConfigurationError("The v_λ family lives on S³ (k=1)")
    if not arg:
        raise ConfigurationError("Expected 'lambda:<float>'")
    try:
        lam = float(arg)
    except ValueError as e:
        raise ConfigurationError(f"Invalid lambda '{arg}'") from e
    return lambda_field(lam)


def _custom_builder(arg: Optional[str], dim: Optional[SphereDim]) -> FieldDefinition:
    if not arg:
        raise ConfigurationError("Expected 'custom:<path>'")
    field = custom_field_from_file(arg)
    if dim is not None and field.dim != dim:
        raise ConfigurationError(f"Custom field lives on k={field.dim.k}, domain needs k={dim.k}")
    return field


FIELDS: Dict[str, Callable[[Optional[str], Optional[SphereDim]], FieldDefinition]] = {
    "hopf": _hopf_builder,
    "lambda": _lambda_builder,
    "custom": _custom_builder,
}


def resolve_field(spec: str, dim: Optional[SphereDim] = None) -> FieldDefinition:
    """Build a field from a run-config spec: hopf | lambda:<float> | custom:<path>."""
    name, _, arg = spec.strip().partition(":")
    if name not in FIELDS:
        available = ", ".join(sorted(FIELDS))
        raise ConfigurationError(f"Unknown field '{name}'. Available: {available}")
    return FIELDS[name](arg or None, dim)


def field_names() -> List[str]:
    return sorted(FIELDS)
