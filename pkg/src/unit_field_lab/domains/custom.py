"""User-supplied domains: a sympy chart over a parameter box."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError

from unit_field_lab.config import load_config_file
from unit_field_lab.constants import DEFAULT_SEED
from unit_field_lab.domains.schema import BoundaryPatch, Domain
from unit_field_lab.domains.validation import validate_domain
from unit_field_lab.errors import ConfigurationError, GeometryError
from unit_field_lab.fields.expressions import CHART_FUNCTIONS, parse_expressions, vectorize, vectorize_jacobian
from unit_field_lab.geometry import SphereDim
from unit_field_lab.log import get_logger
from unit_field_lab.models.domain import CustomDomainSpec

logger = get_logger(__name__)


def _gram_root(columns: np.ndarray) -> np.ndarray:
    """sqrt(det(JᵀJ)) for J of shape (..., n, d)."""
    gram = np.einsum("...ia,...ib->...ab", columns, columns)
    return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))


def _insert_axis(params: np.ndarray, axis: int, value: float) -> np.ndarray:
    fixed = np.full(params.shape[:-1] + (1,), value)
    return np.concatenate([params[..., :axis], fixed, params[..., axis:]], axis=-1)


def _boundary_patch(spec: CustomDomainSpec, chart, jacobian) -> BoundaryPatch:
    axis = spec.boundary_axis
    face = spec.hi[axis]
    keep = [a for a in range(len(spec.params)) if a != axis]

    def boundary_chart(params: np.ndarray) -> np.ndarray:
        return chart(_insert_axis(params, axis, face))

    def area_element(params: np.ndarray) -> np.ndarray:
        return _gram_root(jacobian(_insert_axis(params, axis, face))[..., keep])

    def conormal(params: np.ndarray) -> np.ndarray:
        full = _insert_axis(params, axis, face)
        x = chart(full)
        jac = jacobian(full)
        # ∂x/∂u_b minus its part along x and the boundary tangents
        basis = np.concatenate([x[..., :, None], jac[..., keep]], axis=-1)
        normal = jac[..., axis]
        gram = np.einsum("...ia,...ib->...ab", basis, basis)
        rhs = np.einsum("...ia,...i->...a", basis, normal)
        coeffs = np.linalg.solve(gram, rhs[..., None])[..., 0]
        residual = normal - np.einsum("...ia,...a->...i", basis, coeffs)
        return residual / np.linalg.norm(residual, axis=-1, keepdims=True)

    return BoundaryPatch(
        chart=boundary_chart,
        param_box=tuple((spec.lo[a], spec.hi[a]) for a in keep),
        periodic_axes=frozenset(keep.index(a) for a in spec.periodic),
        area_element=area_element,
        conormal=conormal,
        normal_axis=axis,
    )


def custom_domain(spec: CustomDomainSpec, validate: bool = True, seed: int = DEFAULT_SEED) -> Domain:
    try:
        dim = SphereDim.from_ambient(len(spec.chart))
    except GeometryError as e:
        raise ConfigurationError(f"Custom domain '{spec.label}': {e}") from e
    exprs = parse_expressions(spec.chart, spec.params, CHART_FUNCTIONS)
    chart = vectorize(exprs, spec.params)
    jacobian = vectorize_jacobian(exprs, spec.params)

    def volume_element(params: np.ndarray) -> np.ndarray:
        return _gram_root(jacobian(params))

    domain = Domain(
        label=spec.label,
        dim=dim,
        chart=chart,
        param_box=tuple(zip(spec.lo, spec.hi)),
        volume_element=volume_element,
        periodic_axes=frozenset(spec.periodic),
        boundary=None if spec.boundary_axis is None else _boundary_patch(spec, chart, jacobian),
    )
    if validate:
        validate_domain(domain, np.random.default_rng(seed))
    logger.info(
        f"Loaded custom domain '{spec.label}'",
        extra={"extra_data": {"params": spec.params, "k": dim.k, "boundary_axis": spec.boundary_axis}},
    )
    return domain


def _bound(value) -> float:
    if isinstance(value, str):
        expr = parse_expressions([value], [])[0]
        return float(expr)
    return float(value)


def custom_domain_from_file(path: Union[str, Path], seed: Optional[int] = None) -> Domain:
    """Load a key-value domain file: label, params, lo, hi, periodic, chart, boundary_axis.

    Bounds may be constant expressions such as "2*pi".
    """
    values = load_config_file(path)
    values.setdefault("label", Path(path).stem)
    for key in ("params", "chart", "lo", "hi", "periodic"):
        if key in values and not isinstance(values[key], list):
            values[key] = [values[key]]
    for key in ("lo", "hi"):
        if key in values:
            values[key] = [_bound(v) for v in values[key]]
    try:
        spec = CustomDomainSpec(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid custom domain file {path}: {e}") from e
    return custom_domain(spec, seed=DEFAULT_SEED if seed is None else seed)


def custom_domain_from_lines(
    params: Sequence[str],
    lo: Sequence[float],
    hi: Sequence[float],
    chart: Sequence[str],
    periodic: Sequence[int] = (),
    boundary_axis: Optional[int] = None,
    label: str = "custom",
) -> Domain:
    spec = CustomDomainSpec(
        label=label,
        params=list(params),
        lo=list(lo),
        hi=list(hi),
        chart=list(chart),
        periodic=list(periodic),
        boundary_axis=boundary_axis,
    )
    return custom_domain(spec)
