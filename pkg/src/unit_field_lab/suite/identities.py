"""Algebraic identities of trace-free matrices behind the energy lower bounds.

For h of size m = 2k with tr h = 0, writing d_i = h_ii:

    Σ_{i<j}(d_i - d_j)² = (m-1)Σ d_i² - 2Σ_{i<j} d_i d_j
    -2Σ_{i<j} d_i d_j = Σ d_i²
    Σ_{i<j}(d_i - d_j)² = -2m Σ_{i<j} d_i d_j
    Σ_{i<j}(h_ij + h_ji)² = Σ_{i≠j} h_ij² + 2Σ_{i<j} h_ij h_ji
    Σ_{i≠j} h_ij² >= 2σ_2
    Σ_{i,j} h_ij² >= 2σ_2
"""

from __future__ import annotations

from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from unit_field_lab.constants import DEFAULT_SEED, IDENTITY_SAMPLES, IDENTITY_TOL
from unit_field_lab.log import get_logger
from unit_field_lab.models import CheckStatus, Relation, VerificationReport
from unit_field_lab.shape import elementary_symmetric

logger = get_logger(__name__)

Sides = Tuple[np.ndarray, np.ndarray]


def random_trace_free(size: int, count: int, rng: np.random.Generator) -> np.ndarray:
    h = rng.standard_normal((count, size, size))
    trace = np.trace(h, axis1=-2, axis2=-1)
    return h - (trace / size)[:, None, None] * np.eye(size)


def _pairs(m: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(m, k=1)


def _diagonal_spread(h: np.ndarray) -> Sides:
    m = h.shape[-1]
    d = np.diagonal(h, axis1=-2, axis2=-1)
    i, j = _pairs(m)
    cross = np.sum(d[..., i] * d[..., j], axis=-1)
    lhs = np.sum((d[..., i] - d[..., j]) ** 2, axis=-1)
    return lhs, (m - 1) * np.sum(d**2, axis=-1) - 2.0 * cross


def _trace_free_square(h: np.ndarray) -> Sides:
    m = h.shape[-1]
    d = np.diagonal(h, axis1=-2, axis2=-1)
    i, j = _pairs(m)
    return -2.0 * np.sum(d[..., i] * d[..., j], axis=-1), np.sum(d**2, axis=-1)


def _spread_by_cross(h: np.ndarray) -> Sides:
    m = h.shape[-1]
    d = np.diagonal(h, axis1=-2, axis2=-1)
    i, j = _pairs(m)
    lhs = np.sum((d[..., i] - d[..., j]) ** 2, axis=-1)
    return lhs, -2.0 * m * np.sum(d[..., i] * d[..., j], axis=-1)


def _symmetrized_off_diagonal(h: np.ndarray) -> Sides:
    m = h.shape[-1]
    i, j = _pairs(m)
    upper, lower = h[..., i, j], h[..., j, i]
    off = np.sum(h**2, axis=(-2, -1)) - np.sum(np.diagonal(h, axis1=-2, axis2=-1) ** 2, axis=-1)
    return np.sum((upper + lower) ** 2, axis=-1), off + 2.0 * np.sum(upper * lower, axis=-1)


def _off_diagonal_bound(h: np.ndarray) -> Sides:
    off = np.sum(h**2, axis=(-2, -1)) - np.sum(np.diagonal(h, axis1=-2, axis2=-1) ** 2, axis=-1)
    return off, 2.0 * elementary_symmetric(h)[..., 1]


def _frobenius_bound(h: np.ndarray) -> Sides:
    return np.sum(h**2, axis=(-2, -1)), 2.0 * elementary_symmetric(h)[..., 1]


IDENTITIES: Dict[str, Tuple[str, Callable[[np.ndarray], Sides]]] = {
    "diagonal spread": ("==", _diagonal_spread),
    "trace-free diagonal square": ("==", _trace_free_square),
    "spread as diagonal cross terms": ("==", _spread_by_cross),
    "symmetrized off-diagonal square": ("==", _symmetrized_off_diagonal),
    "off-diagonal square >= 2σ2": (">=", _off_diagonal_bound),
    "Frobenius square >= 2σ2": (">=", _frobenius_bound),
}


def _worst(relation: str, description: str, lhs: np.ndarray, rhs: np.ndarray, tol: float) -> Relation:
    scale = np.maximum(1.0, np.abs(rhs))
    if relation == "==":
        index = int(np.argmax(np.abs(lhs - rhs) / scale))
        return Relation.equal(description, float(lhs[index]), float(rhs[index]), tol * float(scale[index]))
    index = int(np.argmin((lhs - rhs) / scale))
    return Relation.at_least(description, float(lhs[index]), float(rhs[index]), tol * float(scale[index]))


def check_algebraic_identities(
    sizes: Sequence[int] = (2, 4, 6),
    samples: int = IDENTITY_SAMPLES,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOL,
) -> VerificationReport:
    """Each identity on `samples` random trace-free matrices per size; reports the worst sample."""
    rng = np.random.default_rng(seed)
    relations: List[Relation] = []
    for size in sizes:
        h = random_trace_free(size, samples, rng)
        for name, (relation, sides) in IDENTITIES.items():
            lhs, rhs = sides(h)
            relations.append(_worst(relation, f"{name} (size {size})", lhs, rhs, tol))
    status = CheckStatus.PASSED if all(r.passed for r in relations) else CheckStatus.FAILED
    logger.info(
        "Trace-free identity suite",
        extra={"extra_data": {"check_id": "identities", "status": status.value, "sizes": list(sizes)}},
    )
    return VerificationReport(
        check_id="identities",
        field_label="-",
        domain_label="-",
        status=status,
        conclusions=relations,
        notes=f"{samples} random trace-free matrices per size, seed {seed}",
    )
