"""Verification checks for the volume and energy lower bounds of unit fields.

A check first evaluates its hypotheses. Conclusions are only asserted when every
hypothesis holds; otherwise the report says "hypotheses not met" and still carries
the computed functionals. A conclusion (or an implied intermediate inequality)
failing under passing hypotheses is reported as FAILED, the red-flag state.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence

from unit_field_lab.constants import (
    BOUNDARY_COINCIDENCE_TOL,
    CONCLUSION_SLACK,
    DEFAULT_T_VALUES,
    DICHOTOMY_TOL,
    HYPOTHESIS_TOL,
    JACOBIAN_FD_TOL,
    MC_SIGMA_MULTIPLIER,
    N_JOBS,
)
from unit_field_lab.domains import boundary_nodes, complement_torus, solid_torus
from unit_field_lab.domains.quadrature import AnyDomain
from unit_field_lab.errors import ConfigurationError
from unit_field_lab.fields import FieldDefinition, boundary_mismatch, hopf, is_hopf
from unit_field_lab.geometry import sphere_volume
from unit_field_lab.log import get_logger
from unit_field_lab.models import (
    CheckStatus,
    Condition,
    FunctionalResult,
    QuadratureSpec,
    Relation,
    VerificationReport,
)
from unit_field_lab.shape import GramMode
from unit_field_lab.suite.functionals import (
    assess_pvp,
    domain_volume_of,
    energy_of_field,
    flux,
    jacobian_crosscheck,
    sigma_integral,
    volume_of_field,
)

logger = get_logger(__name__)


def _slack(vol: FunctionalResult, *results: FunctionalResult) -> float:
    """One-sided slack: relative to vol(K), widened by 3σ of any Monte Carlo estimate."""
    spread = math.sqrt(sum(r.stderr**2 for r in results))
    return CONCLUSION_SLACK * abs(vol.value) + MC_SIGMA_MULTIPLIER * spread


def _status(hypotheses: List[Condition], asserted: List[Relation]) -> CheckStatus:
    if not all(h.passed for h in hypotheses):
        return CheckStatus.HYPOTHESES_NOT_MET
    if all(r.passed for r in asserted):
        return CheckStatus.PASSED
    return CheckStatus.FAILED


def _report(
    check_id: str,
    f: FieldDefinition,
    dom_label: str,
    hypotheses: List[Condition],
    conclusions: List[Relation],
    chain: List[Relation],
    functionals: List[FunctionalResult],
    t_values: Sequence[float] = (),
    asserted_chain: Optional[List[Relation]] = None,
    notes: str = "",
) -> VerificationReport:
    met = all(h.passed for h in hypotheses)
    status = _status(hypotheses, conclusions + (asserted_chain or []))
    report = VerificationReport(
        check_id=check_id,
        field_label=f.label,
        domain_label=dom_label,
        t_values=list(t_values),
        status=status,
        hypotheses=hypotheses,
        conclusions=conclusions if met else [],
        chain=chain,
        functionals=functionals,
        notes=notes,
    )
    log = logger.error if status == CheckStatus.FAILED else logger.info
    log(
        f"Check {check_id}: {status.value}",
        extra={"extra_data": {"check_id": check_id, "field": f.label, "domain": dom_label, "status": status.value}},
    )
    return report


def _require_k1(f: FieldDefinition, check_id: str) -> None:
    if f.dim.k != 1:
        raise ConfigurationError(f"Check {check_id} is stated on S³ (k=1), field lives on k={f.dim.k}")


def _require_positive_t(t_list: Sequence[float], check_id: str) -> None:
    # φ_0 is the identity, so the ratio at t = 0 is 1 for every field
    bad = [t for t in t_list if not t > 0.0]
    if bad:
        raise ConfigurationError(f"Check {check_id} needs t > 0, got {bad}")


def pvp_gate_slack(volume: float, t: float, tol: float) -> float:
    """Deficit in ∫σ2 >= vol(K) still admitted by the gates ratio >= 1 - tol and |flux| <= tol·vol(K).

    On S³, vol(φ_t(K)) = √(1+t²)(vol(K) + t∫σ1 + t²∫σ2), so both tolerances are
    scaled by (1+t²)/t² and 1/t.
    """
    return tol * abs(volume) * ((1.0 + t * t) / (t * t) + 1.0 / t)


def closed_form_volume(dom: AnyDomain, vol: FunctionalResult, tol: float = HYPOTHESIS_TOL) -> List[Relation]:
    """Quadrature vol(K) against the domain's closed form; empty when none is known."""
    analytic = getattr(dom, "analytic_volume", None)
    if analytic is None:
        return []
    slack = tol * abs(analytic) + MC_SIGMA_MULTIPLIER * vol.stderr
    return [Relation.equal("vol(K) = closed form", vol.value, analytic, slack)]


def boundary_hopf_condition(f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec) -> Condition:
    """max|f - H| over the boundary nodes; vacuous on closed domains."""
    b = getattr(dom, "boundary", None)
    if b is None:
        return Condition(
            description="coincides with the Hopf flow on ∂K (vacuous: no boundary)",
            value=0.0,
            tolerance=BOUNDARY_COINCIDENCE_TOL,
            passed=True,
        )
    mismatch = boundary_mismatch(f, hopf(f.dim), boundary_nodes(b, q))
    return Condition(
        description="coincides with the Hopf flow on ∂K (max-norm over boundary nodes)",
        value=mismatch,
        tolerance=BOUNDARY_COINCIDENCE_TOL,
        passed=mismatch <= BOUNDARY_COINCIDENCE_TOL,
    )


def check_divergence_closure(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, tol: float = HYPOTHESIS_TOL, n_jobs: int = N_JOBS
) -> VerificationReport:
    """∫_K σ_1 against ∫_{∂K} <v, η>, the two forms of the zero-flux hypothesis."""
    vol = domain_volume_of(f, dom, q)
    sigma1, _ = sigma_integral(f, dom, q, 1, n_jobs)
    boundary = flux(f, dom, q, n_jobs)
    slack = tol * abs(vol.value) + MC_SIGMA_MULTIPLIER * sigma1.stderr
    closure = Relation.equal("∫_K σ1 = ∫_∂K <v, η>", sigma1.value, boundary.value, slack)
    return _report(
        "divergence",
        f,
        dom.label,
        hypotheses=[],
        conclusions=[closure],
        chain=[],
        functionals=[vol, sigma1, boundary],
        notes=f"discrepancy {sigma1.value - boundary.value:.3e}",
    )


def check_hopf_minimality(
    f: FieldDefinition,
    dom: AnyDomain,
    q: QuadratureSpec,
    t_list: Sequence[float] = DEFAULT_T_VALUES,
    tol: float = HYPOTHESIS_TOL,
    gram: GramMode = "full",
    n_jobs: int = N_JOBS,
) -> VerificationReport:
    """Zero flux and the proportional volume property imply vol(v) >= 2vol(K), E(v) >= (5/2)vol(K)."""
    _require_k1(f, "1.4")
    if not t_list:
        raise ConfigurationError("Check 1.4 needs at least one t value")
    _require_positive_t(t_list, "1.4")
    vol = domain_volume_of(f, dom, q)
    volume = vol.value
    boundary = flux(f, dom, q, n_jobs)
    hypotheses = [
        Condition(
            description="∫_∂K <v, η> = 0 (normalized by vol(K))",
            value=abs(boundary.value) / volume,
            tolerance=tol,
            passed=abs(boundary.value) / volume <= tol,
        )
    ]
    functionals = [vol, boundary]
    crosschecks: List[Relation] = []
    for t in t_list:
        pvp = assess_pvp(f, dom, q, t, n_jobs)
        functionals.append(pvp.pushforward)
        crosschecks.append(
            Relation.equal(
                f"det(dφ_t) closed form = finite differences, t={t:g}",
                jacobian_crosscheck(f, dom, q, t),
                0.0,
                JACOBIAN_FD_TOL,
            )
        )
        hypotheses.append(
            Condition(
                description=f"proportional volume ratio >= 1 at t={t:g}",
                value=pvp.ratio,
                tolerance=tol,
                passed=pvp.ratio >= 1.0 - tol,
            )
        )
        hypotheses.append(
            Condition(
                description=f"det(dφ_t) > 0 at every node, t={t:g}",
                value=float(pvp.pushforward.min_jacobian),
                tolerance=0.0,
                passed=pvp.diffeomorphic,
            )
        )

    field_volume = volume_of_field(f, dom, q, gram, n_jobs)
    energy = energy_of_field(f, dom, q, n_jobs)
    sigma1, _ = sigma_integral(f, dom, q, 1, n_jobs)
    sigma2, _ = sigma_integral(f, dom, q, 2, n_jobs)
    functionals += [field_volume, energy, sigma1, sigma2]

    slack = _slack(vol, field_volume, energy)
    implied_slack = slack + pvp_gate_slack(volume, max(t_list), tol)
    conclusions = [
        Relation.at_least("vol(v) >= 2 vol(K)", field_volume.value, 2.0 * volume, implied_slack),
        Relation.at_least("E(v) >= (5/2) vol(K)", energy.value, 2.5 * volume, implied_slack),
    ]
    implied = Relation.at_least("∫σ2 >= vol(K)", sigma2.value, volume, implied_slack)
    chain = [
        Relation.equal("∫σ1 = 0", sigma1.value, 0.0, tol * volume),
        implied,
        Relation.equal("∫σ1 = ∫_∂K <v, η>", sigma1.value, boundary.value, tol * volume),
        Relation.at_least("vol(v) >= vol(K) + ∫σ2", field_volume.value, volume + sigma2.value, slack),
        Relation.at_least("E(v) >= (3/2) vol(K) + ∫σ2", energy.value, 1.5 * volume + sigma2.value, slack),
    ]
    equalities: List[Relation] = []
    if is_hopf(f):
        equalities = [
            Relation.equal("vol(H) = 2 vol(K)", field_volume.value, 2.0 * volume, tol * volume),
            Relation.equal("E(H) = (5/2) vol(K)", energy.value, 2.5 * volume, tol * volume),
        ]
    chain += equalities + crosschecks + closed_form_volume(dom, vol, tol)
    return _report(
        "1.4",
        f,
        dom.label,
        hypotheses,
        conclusions,
        chain,
        functionals,
        t_values=t_list,
        asserted_chain=[implied] + equalities,
    )


def _sigma2_relation(f: FieldDefinition, vol: FunctionalResult, sigma2: FunctionalResult, tol: float) -> Relation:
    k = f.dim.k
    scale = abs(vol.value)
    slack = tol * scale + MC_SIGMA_MULTIPLIER * sigma2.stderr
    return Relation.equal(f"∫σ2 = {k} vol(K)", sigma2.value, k * vol.value, slack)


def _solenoidal_condition(max_sigma1: float, tol: float) -> Condition:
    return Condition(
        description="solenoidal: max |σ1| over nodes",
        value=max_sigma1,
        tolerance=tol,
        passed=max_sigma1 <= tol,
    )


def check_solenoidal_energy(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, tol: float = HYPOTHESIS_TOL, n_jobs: int = N_JOBS
) -> VerificationReport:
    """Solenoidal fields equal to H on ∂K have E(v) >= ((2k+1)/2 + k) vol(K)."""
    k = f.dim.k
    vol = domain_volume_of(f, dom, q)
    sigma1, max_sigma1 = sigma_integral(f, dom, q, 1, n_jobs)
    hypotheses = [_solenoidal_condition(max_sigma1, tol), boundary_hopf_condition(f, dom, q)]

    energy = energy_of_field(f, dom, q, n_jobs)
    sigma2, _ = sigma_integral(f, dom, q, 2, n_jobs)
    bound = ((2 * k + 1) / 2.0 + k) * vol.value
    slack = _slack(vol, energy)
    conclusions = [Relation.at_least(f"E(v) >= ({2 * k + 1}/2 + {k}) vol(K)", energy.value, bound, slack)]
    sigma2_relation = _sigma2_relation(f, vol, sigma2, tol)
    chain = [sigma2_relation] + closed_form_volume(dom, vol, tol)
    asserted = [sigma2_relation]
    if is_hopf(f):
        equality = Relation.equal("E(H) equals the bound", energy.value, bound, slack + tol * abs(vol.value))
        chain.append(equality)
        asserted.append(equality)
    return _report(
        "1.6",
        f,
        dom.label,
        hypotheses,
        conclusions,
        chain,
        [vol, sigma1, sigma2, energy],
        asserted_chain=asserted,
    )


def check_sigma2_integral(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, tol: float = HYPOTHESIS_TOL, n_jobs: int = N_JOBS
) -> VerificationReport:
    """∫_K σ_2 = k vol(K) for solenoidal fields that are Hopf along ∂K."""
    vol = domain_volume_of(f, dom, q)
    sigma1, max_sigma1 = sigma_integral(f, dom, q, 1, n_jobs)
    sigma2, _ = sigma_integral(f, dom, q, 2, n_jobs)
    hypotheses = [_solenoidal_condition(max_sigma1, tol), boundary_hopf_condition(f, dom, q)]
    return _report(
        "sigma2_integral",
        f,
        dom.label,
        hypotheses,
        [_sigma2_relation(f, vol, sigma2, tol)],
        [],
        [vol, sigma1, sigma2],
    )


def check_sphere_lower_bounds(
    f: FieldDefinition,
    dom: AnyDomain,
    q: QuadratureSpec,
    tol: float = HYPOTHESIS_TOL,
    gram: GramMode = "full",
    n_jobs: int = N_JOBS,
) -> VerificationReport:
    """Fields equal to H on ∂K: vol(v) >= 4^k/C(2k,k) vol(K), E(v) >= ((2k+1)/2 + k/(2k-1)) vol(K)."""
    k = f.dim.k
    vol = domain_volume_of(f, dom, q)
    hypotheses = [boundary_hopf_condition(f, dom, q)]
    field_volume = volume_of_field(f, dom, q, gram, n_jobs)
    energy = energy_of_field(f, dom, q, n_jobs)
    volume_factor = 4**k / math.comb(2 * k, k)
    energy_factor = (2 * k + 1) / 2.0 + k / (2 * k - 1)
    slack = _slack(vol, field_volume, energy)
    conclusions = [
        Relation.at_least(f"vol(v) >= {volume_factor:g} vol(K)", field_volume.value, volume_factor * vol.value, slack),
        Relation.at_least(f"E(v) >= {energy_factor:g} vol(K)", energy.value, energy_factor * vol.value, slack),
    ]
    chain: List[Relation] = []
    if is_hopf(f) and k == 1:
        # both bounds are attained by H on S³ domains
        chain = [
            Relation.equal("vol(H) = 2 vol(K)", field_volume.value, 2.0 * vol.value, slack + tol * abs(vol.value)),
            Relation.equal("E(H) = (5/2) vol(K)", energy.value, 2.5 * vol.value, slack + tol * abs(vol.value)),
        ]
    return _report(
        "1.3",
        f,
        dom.label,
        hypotheses,
        conclusions,
        chain,
        [vol, field_volume, energy],
        asserted_chain=chain,
    )


def check_dichotomy(
    f: FieldDefinition,
    delta_max: float,
    q: QuadratureSpec,
    t: float,
    tol: float = HYPOTHESIS_TOL,
    n_jobs: int = N_JOBS,
) -> VerificationReport:
    """One of K(delta_max), K^c has the proportional volume property at t."""
    _require_k1(f, "dichotomy")
    _require_positive_t([t], "dichotomy")
    inside, outside = solid_torus(delta_max), complement_torus(delta_max)
    pvp_in = assess_pvp(f, inside, q, t, n_jobs)
    pvp_out = assess_pvp(f, outside, q, t, n_jobs)
    hypotheses = [
        Condition(
            description=f"det(dφ_t) > 0 at every node of {side.pushforward.domain_label}",
            value=float(side.pushforward.min_jacobian),
            tolerance=0.0,
            passed=side.diffeomorphic,
        )
        for side in (pvp_in, pvp_out)
    ]
    best = max(pvp_in.ratio, pvp_out.ratio)
    target = sphere_volume(f.dim)
    weighted = pvp_in.ratio * pvp_in.domain_volume.value + pvp_out.ratio * pvp_out.domain_volume.value
    conclusions = [
        Relation.at_least("max(ratio K, ratio K^c) >= 1", best, 1.0, DICHOTOMY_TOL),
        Relation.equal("ratio_K vol(K) + ratio_K^c vol(K^c) = vol(S³)", weighted, target, tol * target),
    ]
    chain = [
        Relation.at_least("ratio K >= 1", pvp_in.ratio, 1.0, DICHOTOMY_TOL),
        Relation.at_least("ratio K^c >= 1", pvp_out.ratio, 1.0, DICHOTOMY_TOL),
    ]
    asserted: List[Relation] = []
    if is_hopf(f):
        asserted = [
            Relation.equal("ratio K = 1 for the Hopf flow", pvp_in.ratio, 1.0, DICHOTOMY_TOL),
            Relation.equal("ratio K^c = 1 for the Hopf flow", pvp_out.ratio, 1.0, DICHOTOMY_TOL),
        ]
        chain += asserted
    sides = [label for label, pvp in (("K", pvp_in), ("K^c", pvp_out)) if pvp.ratio >= 1.0 - DICHOTOMY_TOL]
    return _report(
        "dichotomy",
        f,
        f"{inside.label} | {outside.label}",
        hypotheses,
        conclusions,
        chain,
        [pvp_in.domain_volume, pvp_in.pushforward, pvp_out.domain_volume, pvp_out.pushforward],
        t_values=[t],
        asserted_chain=asserted,
        notes="proportional volume property holds on: " + (", ".join(sides) or "neither"),
    )
