"""Schedules the selected checks as independent jobs."""

from __future__ import annotations

from functools import partial
from typing import Callable, List, Sequence

from joblib import Parallel, delayed

from unit_field_lab.constants import IDENTITY_SAMPLES, N_JOBS
from unit_field_lab.domains.quadrature import AnyDomain
from unit_field_lab.errors import ConfigurationError
from unit_field_lab.fields import FieldDefinition
from unit_field_lab.log import get_logger
from unit_field_lab.models import QuadratureSpec, VerificationReport
from unit_field_lab.shape import GramMode
from unit_field_lab.suite.checks import (
    check_dichotomy,
    check_divergence_closure,
    check_sigma2_integral,
    check_sphere_lower_bounds,
    check_hopf_minimality,
    check_solenoidal_energy,
)
from unit_field_lab.suite.identities import check_algebraic_identities

logger = get_logger(__name__)

Job = Callable[[], VerificationReport]

SUITES = ("1.3", "1.4", "1.6", "dichotomy", "identities")
K1_ONLY = {"1.4", "dichotomy"}


def plan_jobs(
    selection: Sequence[str],
    f: FieldDefinition,
    dom: AnyDomain,
    q: QuadratureSpec,
    t_values: Sequence[float],
    delta_max: float,
    tol: float,
    gram: GramMode = "full",
    explicit: bool = True,
    inner_jobs: int = 1,
) -> List[Job]:
    """One zero-argument job per report, in selection order.

    With explicit=False (the "all" selector) checks stated only on S³ are skipped
    for higher spheres instead of rejected.
    """
    jobs: List[Job] = []
    for name in selection:
        if name not in SUITES:
            raise ConfigurationError(f"Unknown suite '{name}'. Available: {', '.join(SUITES)}, all")
        if name in K1_ONLY and f.dim.k != 1:
            if explicit:
                raise ConfigurationError(f"Suite '{name}' is stated on S³ (k=1), field lives on k={f.dim.k}")
            logger.info(f"Skipping suite {name} for k={f.dim.k}")
            continue
        if name == "1.3":
            jobs.append(partial(check_sphere_lower_bounds, f, dom, q, tol, gram, inner_jobs))
        elif name == "1.4":
            jobs.append(partial(check_hopf_minimality, f, dom, q, list(t_values), tol, gram, inner_jobs))
            jobs.append(partial(check_divergence_closure, f, dom, q, tol, inner_jobs))
        elif name == "1.6":
            jobs.append(partial(check_solenoidal_energy, f, dom, q, tol, inner_jobs))
        elif name == "dichotomy":
            for t in t_values:
                jobs.append(partial(check_dichotomy, f, delta_max, q, t, tol, inner_jobs))
        elif name == "identities":
            jobs.append(partial(check_algebraic_identities, (2, 4, 6), IDENTITY_SAMPLES, q.rng_seed))
            jobs.append(partial(check_sigma2_integral, f, dom, q, tol, inner_jobs))
    return jobs


def run_jobs(jobs: Sequence[Job], n_jobs: int = N_JOBS) -> List[VerificationReport]:
    """Run jobs concurrently (threads); reports keep the job order."""
    if n_jobs == 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    return list(Parallel(n_jobs=n_jobs, prefer="threads")(delayed(job)() for job in jobs))


def run_suite(
    selection: Sequence[str],
    f: FieldDefinition,
    dom: AnyDomain,
    q: QuadratureSpec,
    t_values: Sequence[float],
    delta_max: float,
    tol: float,
    gram: GramMode = "full",
    n_jobs: int = N_JOBS,
) -> List[VerificationReport]:
    explicit = "all" not in selection
    names = list(SUITES) if not explicit else list(dict.fromkeys(selection))
    jobs = plan_jobs(names, f, dom, q, t_values, delta_max, tol, gram, explicit)
    logger.info(
        "Running verification suite",
        extra={"extra_data": {"suites": names, "jobs": len(jobs), "field": f.label, "domain": dom.label}},
    )
    return run_jobs(jobs, n_jobs)
