"""Cross-checks of a domain's chart against its declared volume and area elements."""

from __future__ import annotations

from typing import Callable, Union

import numpy as np

from unit_field_lab.constants import CHART_CHECK_TOL, CHART_FD_STEP, DOMAIN_CHECK_SAMPLES, SPHERE_TOL
from unit_field_lab.domains.schema import Box, Domain, MonteCarloSphere
from unit_field_lab.errors import ConfigurationError
from unit_field_lab.geometry import inner
from unit_field_lab.log import get_logger

logger = get_logger(__name__)


def _interior_samples(box: Box, count: int, rng: np.random.Generator) -> np.ndarray:
    lo = np.array([a for a, _ in box])
    hi = np.array([b for _, b in box])
    # keep clear of the faces so central differences stay inside the box
    margin = 0.05 * (hi - lo)
    return lo + margin + rng.random((count, len(box))) * (hi - lo - 2.0 * margin)


def _fd_columns(chart: Callable[[np.ndarray], np.ndarray], params: np.ndarray) -> np.ndarray:
    """Central-difference ∂x/∂u_a as columns, shape (count, n, d)."""
    columns = []
    for axis in range(params.shape[-1]):
        step = np.zeros(params.shape[-1])
        step[axis] = CHART_FD_STEP
        columns.append((chart(params + step) - chart(params - step)) / (2.0 * CHART_FD_STEP))
    return np.stack(columns, axis=-1)


def _fd_gram_root(columns: np.ndarray) -> np.ndarray:
    gram = np.einsum("...ia,...ib->...ab", columns, columns)
    return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))


def _check_close(label: str, what: str, declared: np.ndarray, reference: np.ndarray) -> float:
    error = np.abs(declared - reference) / np.maximum(1.0, np.abs(reference))
    worst = float(error.max()) if error.size else 0.0
    if not np.isfinite(worst) or worst > CHART_CHECK_TOL:
        raise ConfigurationError(f"Domain '{label}': {what} disagrees with the chart by {worst:.3e}")
    return worst


def validate_domain(
    dom: Union[Domain, MonteCarloSphere], rng: np.random.Generator, samples: int = DOMAIN_CHECK_SAMPLES
) -> float:
    """Charted points lie on the sphere, √det G and the boundary data match the chart.

    Returns the worst relative discrepancy seen.
    """
    if isinstance(dom, MonteCarloSphere):
        return 0.0
    params = _interior_samples(dom.param_box, samples, rng)
    x = dom.chart(params)
    off_sphere = float(np.abs(np.linalg.norm(x, axis=-1) - 1.0).max())
    if not np.isfinite(off_sphere) or off_sphere > SPHERE_TOL:
        raise ConfigurationError(f"Domain '{dom.label}': chart leaves the unit sphere by {off_sphere:.3e}")

    worst = _check_close(dom.label, "volume element", dom.volume_element(params), _fd_gram_root(_fd_columns(dom.chart, params)))

    b = dom.boundary
    if b is not None:
        face = _interior_samples(b.param_box, samples, rng)
        points = b.chart(face)
        tangents = _fd_columns(b.chart, face)
        worst = max(worst, _check_close(dom.label, "boundary area element", b.area_element(face), _fd_gram_root(tangents)))
        eta = b.conormal(face)
        residuals = [
            np.abs(np.linalg.norm(eta, axis=-1) - 1.0),
            np.abs(inner(eta, points)),
            np.abs(np.einsum("...ia,...i->...a", tangents, eta)).max(axis=-1),
        ]
        worst_conormal = float(max(r.max() for r in residuals))
        if not np.isfinite(worst_conormal) or worst_conormal > CHART_CHECK_TOL:
            raise ConfigurationError(
                f"Domain '{dom.label}': conormal is not a unit normal of the boundary (error {worst_conormal:.3e})"
            )
        # stepping inward along the normal axis must move against η
        lo, hi = dom.param_box[b.normal_axis]
        inward = np.insert(face, b.normal_axis, hi - 0.01 * (hi - lo), axis=-1)
        if np.any(inner(dom.chart(inward) - points, eta) >= 0.0):
            raise ConfigurationError(f"Domain '{dom.label}': conormal does not point out of the domain")
        worst = max(worst, worst_conormal)

    logger.debug(f"Validated domain '{dom.label}'", extra={"extra_data": {"samples": samples, "worst": worst}})
    return worst
