"""Deterministic integration over parametrized domains and the Monte Carlo sphere.

Nodes may be evaluated concurrently in chunks; the weighted values are always
accumulated in node-index order with math.fsum, so results do not depend on the
number of workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from unit_field_lab.constants import CHUNK_SIZE, N_JOBS
from unit_field_lab.domains.schema import Box, BoundaryPatch, Domain, MonteCarloSphere
from unit_field_lab.errors import ConfigurationError, IntegrandError, NonSmoothFieldError, UnitFieldLabError
from unit_field_lab.geometry import SphereDim, SpherePoint, TangentVector, sphere_volume
from unit_field_lab.log import get_logger
from unit_field_lab.models.quadrature import QuadratureSpec

logger = get_logger(__name__)

Integrand = Callable[[SpherePoint], np.ndarray]
BoundaryIntegrand = Callable[[SpherePoint, TangentVector], np.ndarray]
AnyDomain = Union[Domain, MonteCarloSphere]


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    nodes: int
    method: Literal["tensor", "monte_carlo"]


def axis_rule(lo: float, hi: float, nodes: int, periodic: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Periodic trapezoid nodes or Gauss-Legendre nodes mapped to [lo, hi]."""
    width = hi - lo
    if periodic:
        points = lo + width * np.arange(nodes) / nodes
        return points, np.full(nodes, width / nodes)
    x, w = np.polynomial.legendre.leggauss(nodes)
    return lo + 0.5 * width * (x + 1.0), 0.5 * width * w


def _rules(box: Box, periodic_axes, q: QuadratureSpec, nodes: Sequence[int]) -> List[bool]:
    periodic = [axis in periodic_axes for axis in range(len(box))]
    if q.rule_per_axis is not None:
        requested = [rule == "periodic" for rule in q.rule_per_axis]
        if len(requested) != len(box) or requested != periodic:
            raise ConfigurationError(
                f"rule_per_axis {q.rule_per_axis} does not match periodic axes {sorted(periodic_axes)}"
            )
    if len(nodes) != len(box):
        raise ConfigurationError(f"Need {len(box)} node counts, got {list(nodes)}")
    return periodic


def tensor_grid(
    box: Box, periodic_axes, q: QuadratureSpec, nodes: Optional[Sequence[int]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Parameters (N, d) and weights (N,) of the tensor-product rule in C order."""
    nodes = list(q.nodes_per_axis if nodes is None else nodes)
    periodic = _rules(box, periodic_axes, q, nodes)
    rules = [axis_rule(lo, hi, n, per) for (lo, hi), n, per in zip(box, nodes, periodic)]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weights = np.ones_like(grids[0])
    for axis, (_, w) in enumerate(rules):
        shape = [1] * len(rules)
        shape[axis] = -1
        weights = weights * w.reshape(shape)
    params = np.stack([g.ravel() for g in grids], axis=-1)
    return params, weights.ravel()


def _chunks(count: int, size: int = CHUNK_SIZE) -> List[slice]:
    return [slice(start, min(start + size, count)) for start in range(0, count, size)]


def _evaluate_chunk(fn: Callable[[slice], np.ndarray], chunk: slice, nodes: np.ndarray) -> np.ndarray:
    try:
        return np.asarray(fn(chunk), dtype=float)
    except NonSmoothFieldError as e:
        raise IntegrandError(f"Integrand failed: {e}", nodes=e.point) from e
    except (UnitFieldLabError, ValueError, FloatingPointError) as e:
        raise IntegrandError(f"Integrand failed on nodes {chunk.start}..{chunk.stop}: {e}", nodes=nodes[chunk]) from e


def evaluate_nodes(fn: Callable[[slice], np.ndarray], nodes: np.ndarray, n_jobs: int = N_JOBS) -> np.ndarray:
    """Evaluate fn chunk by chunk (possibly concurrently) and reassemble in index order."""
    chunks = _chunks(len(nodes))
    if n_jobs == 1 or len(chunks) == 1:
        parts = [_evaluate_chunk(fn, c, nodes) for c in chunks]
    else:
        parts = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(_evaluate_chunk)(fn, c, nodes) for c in chunks)
    values = np.concatenate(parts) if parts else np.zeros(0)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise IntegrandError(f"Integrand is not finite at node {bad}", nodes=nodes[bad])
    return values


def ordered_sum(values: np.ndarray) -> float:
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def integrate(dom: Domain, q: QuadratureSpec, g: Integrand, n_jobs: int = N_JOBS) -> float:
    """Σ w_i · g(chart(u_i)) · volume_element(u_i) over the tensor-product rule."""
    params, weights = tensor_grid(dom.param_box, dom.periodic_axes, q)
    measure = weights * dom.volume_element(params)
    values = evaluate_nodes(lambda c: g(dom.points(params[c])), params, n_jobs)
    result = ordered_sum(values * measure)
    logger.debug(
        f"Integrated over {dom.label}",
        extra={"extra_data": {"domain": dom.label, "nodes": len(params), "value": result}},
    )
    return result


def integrate_boundary(b: BoundaryPatch, q: QuadratureSpec, g: BoundaryIntegrand, n_jobs: int = N_JOBS) -> float:
    """2k-dimensional quadrature of g(p, η) against the area element of ∂K."""
    nodes = list(q.nodes_per_axis)
    if len(nodes) == len(b.param_box) + 1:
        nodes.pop(b.normal_axis)
    rule_spec = q.model_copy(update={"rule_per_axis": None})
    params, weights = tensor_grid(b.param_box, b.periodic_axes, rule_spec, nodes)
    measure = weights * b.area_element(params)
    values = evaluate_nodes(lambda c: g(b.points(params[c]), b.conormal_vectors(params[c])), params, n_jobs)
    return ordered_sum(values * measure)


def boundary_nodes(b: BoundaryPatch, q: QuadratureSpec) -> SpherePoint:
    nodes = list(q.nodes_per_axis)
    if len(nodes) == len(b.param_box) + 1:
        nodes.pop(b.normal_axis)
    params, _ = tensor_grid(b.param_box, b.periodic_axes, q.model_copy(update={"rule_per_axis": None}), nodes)
    return b.points(params)


def monte_carlo_sphere(dim: SphereDim, q: QuadratureSpec) -> MonteCarloSphere:
    if q.mc_samples is None:
        raise ConfigurationError("Monte Carlo integration needs mc_samples")
    return MonteCarloSphere(dim=dim, samples=q.mc_samples, seed=q.rng_seed)


def sample_stream(mc: MonteCarloSphere, chunk_size: int = CHUNK_SIZE) -> Iterator[SpherePoint]:
    """Uniform points as normalized Gaussians; chunk c depends only on (seed, c)."""
    for index, chunk in enumerate(_chunks(mc.samples, chunk_size)):
        rng = np.random.default_rng(np.random.SeedSequence([mc.seed, index]))
        gauss = rng.standard_normal((chunk.stop - chunk.start, mc.dim.ambient))
        yield SpherePoint(gauss / np.linalg.norm(gauss, axis=1, keepdims=True))


def monte_carlo_estimate(mc: MonteCarloSphere, g: Integrand, n_jobs: int = N_JOBS) -> Estimate:
    """mean·vol(S^{2k+1}) with its standard error."""
    batches = list(sample_stream(mc))
    if n_jobs == 1 or len(batches) == 1:
        parts = [np.asarray(g(p), dtype=float) for p in batches]
    else:
        parts = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(g)(p) for p in batches)
    values = np.concatenate([np.asarray(p, dtype=float) for p in parts])
    if not np.all(np.isfinite(values)):
        raise IntegrandError("Integrand is not finite at a Monte Carlo sample")
    volume = sphere_volume(mc.dim)
    count = len(values)
    mean = ordered_sum(values) / count
    spread = math.sqrt(ordered_sum((values - mean) ** 2) / (count - 1)) if count > 1 else 0.0
    estimate = Estimate(value=mean * volume, stderr=spread * volume / math.sqrt(count), nodes=count, method="monte_carlo")
    logger.debug(
        "Monte Carlo estimate",
        extra={"extra_data": {"samples": count, "value": estimate.value, "stderr": estimate.stderr}},
    )
    return estimate


def estimate(dom: AnyDomain, q: QuadratureSpec, g: Integrand, n_jobs: int = N_JOBS) -> Estimate:
    if isinstance(dom, MonteCarloSphere):
        return monte_carlo_estimate(dom, g, n_jobs)
    params_count = int(np.prod(q.nodes_per_axis))
    return Estimate(value=integrate(dom, q, g, n_jobs), stderr=0.0, nodes=params_count, method="tensor")


def domain_volume(dom: AnyDomain, q: QuadratureSpec) -> Estimate:
    if isinstance(dom, MonteCarloSphere):
        return Estimate(value=sphere_volume(dom.dim), stderr=0.0, nodes=dom.samples, method="monte_carlo")
    return estimate(dom, q, lambda p: np.ones(p.batch_shape))
