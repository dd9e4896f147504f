"""unit-field-lab command line.

    unit-field-lab volume --field hopf --domain sphere
    unit-field-lab verify --suite all --field lambda:2 --domain solid_torus:0.7071067811865476 --t 0.1,0.25
    unit-field-lab sweep --field lambda --lambda 1:4:0.5 --t 0.05:0.5:0.05 --domain solid_torus

Exit status: 0 when every check passed or reported "hypotheses not met", 1 when a
conclusion failed under passing hypotheses, 2 on configuration or numerical errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from unit_field_lab import __version__
from unit_field_lab.config import load_config_file, merge_overrides, parse_value
from unit_field_lab.constants import CSV_FLOAT_FORMAT
from unit_field_lab.domains import CLIFFORD_DELTA, complement_torus, domain_names, resolve_domain, solid_torus
from unit_field_lab.errors import ConfigurationError, UnitFieldLabError
from unit_field_lab.fields import field_names, lambda_field, resolve_field, validate_field
from unit_field_lab.geometry import SphereDim
from unit_field_lab.log import get_logger
from unit_field_lab.models import FunctionalResult, RunConfig, VerificationReport
from unit_field_lab.suite import (
    assess_pvp,
    build_run_report,
    energy_of_field,
    flux,
    pushforward_volume,
    run_suite,
    volume_of_field,
    write_csv,
    write_json,
)
from unit_field_lab.suite.export import write_rows_csv

logger = get_logger(__name__)

COMMANDS = ("volume", "energy", "pushforward", "pvp", "flux", "verify", "sweep")
FUNCTIONAL_COLUMNS = ["name", "field", "domain", "t", "value", "stderr", "status", "min_jacobian", "method", "nodes"]
SWEEP_COLUMNS = [
    "lambda",
    "t",
    "side",
    "domain",
    "pvp_ratio",
    "pushforward_volume",
    "domain_volume",
    "min_jacobian",
    "diffeomorphic",
]


def _list_flag(text: Optional[str]) -> Optional[List[Any]]:
    """'0.1,0.25' | '0.05:0.5:0.05' | '[64, 64, 48]' | single value."""
    if text is None:
        return None
    if "," in text and not text.strip().startswith("["):
        return [parse_value(item) for item in text.split(",") if item.strip()]
    value = parse_value(text)
    return value if isinstance(value, list) else [value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unit-field-lab",
        description="Volume and energy of unit vector fields on odd-dimensional spheres",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("--config", help="key = value run-configuration file; flags override its keys")
    parser.add_argument("--field", help="Field spec. Available: " + ", ".join(field_names()))
    parser.add_argument("--domain", help="Domain spec. Available: " + ", ".join(domain_names()))
    parser.add_argument("--k", type=int, help="Sphere S^{2k+1} for the Hopf flow (default: 1)")
    parser.add_argument("--t", help="Milnor parameters, e.g. 0.1,0.25 or 0.05:0.5:0.05")
    parser.add_argument("--lambda", dest="lambdas", help="v_λ parameters for sweep, e.g. 1:4:0.5")
    parser.add_argument("--nodes", help="Nodes per axis, e.g. 64,64,48")
    parser.add_argument("--mc-samples", type=int, help="Monte Carlo samples for spheres without a chart")
    parser.add_argument("--seed", type=int, help="Random seed for Monte Carlo and identity checks")
    parser.add_argument("--out-json", help="JSON report path")
    parser.add_argument("--out-csv", help="CSV report path")
    parser.add_argument("--suite", help="Comma-separated checks: 1.3, 1.4, 1.6, dichotomy, identities, all")
    parser.add_argument("--tolerance", type=float, help="Hypothesis tolerance, relative to vol(K)")
    parser.add_argument("--n-jobs", type=int, help="Concurrent workers (threads)")
    parser.add_argument("--gram", choices=["full", "h_block"], help="Volume integrand variant")
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    base: Dict[str, Any] = load_config_file(args.config) if args.config else {}
    overrides = {
        "command": args.command,
        "field": args.field,
        "domain": args.domain,
        "k": args.k,
        "t": _list_flag(args.t),
        "lambda": _list_flag(args.lambdas),
        "nodes": _list_flag(args.nodes),
        "mc_samples": args.mc_samples,
        "seed": args.seed,
        "out_json": args.out_json,
        "out_csv": args.out_csv,
        "suite": [s.strip() for s in args.suite.split(",")] if args.suite else None,
        "tolerance": args.tolerance,
        "n_jobs": args.n_jobs,
        "gram": args.gram,
    }
    return RunConfig(**merge_overrides(base, overrides))


def torus_delta(domain_spec: str) -> float:
    """delta_max named by a torus domain spec; the Clifford value otherwise."""
    name, _, arg = domain_spec.partition(":")
    if name in {"solid_torus", "complement"} and arg:
        try:
            return float(arg)
        except ValueError as e:
            raise ConfigurationError(f"Invalid delta_max '{arg}'") from e
    return CLIFFORD_DELTA


def _functional_row(r: FunctionalResult) -> Dict[str, Any]:
    return {
        "name": r.name,
        "field": r.field_label,
        "domain": r.domain_label,
        "t": r.t,
        "value": r.value,
        "stderr": r.stderr,
        "status": r.status,
        "min_jacobian": r.min_jacobian,
        "method": r.method,
        "nodes": r.nodes,
    }


def _print_functional(r: FunctionalResult) -> None:
    t = "" if r.t is None else CSV_FLOAT_FORMAT % r.t
    line = [r.name, r.field_label, r.domain_label, t, CSV_FLOAT_FORMAT % r.value]
    if r.method == "monte_carlo":
        line.append(f"± {CSV_FLOAT_FORMAT % r.stderr}")
    if r.status != "ok":
        line.append(r.status)
    print("\t".join(line))


def _sweep(config: RunConfig) -> List[Dict[str, Any]]:
    q = config.quadrature()
    delta = torus_delta(config.domain)
    name, _, arg = config.field.partition(":")
    if name == "lambda" and not arg:
        fields = [(lam, lambda_field(lam)) for lam in config.lambdas]
    else:
        field = resolve_field(config.field, SphereDim(config.k))
        fields = [(np.nan, field)]
    rows = []
    for lam, field in fields:
        for t in config.t:
            for side, dom in (("K", solid_torus(delta)), ("K^c", complement_torus(delta))):
                pvp = assess_pvp(field, dom, q, t, config.n_jobs)
                rows.append(
                    {
                        "lambda": lam,
                        "t": t,
                        "side": side,
                        "domain": dom.label,
                        "pvp_ratio": pvp.ratio,
                        "pushforward_volume": pvp.pushforward.value,
                        "domain_volume": pvp.domain_volume.value,
                        "min_jacobian": pvp.pushforward.min_jacobian,
                        "diffeomorphic": pvp.diffeomorphic,
                    }
                )
    return rows


def execute(config: RunConfig) -> int:
    if config.command == "sweep":
        rows = _sweep(config)
        if config.out_csv:
            write_rows_csv(rows, SWEEP_COLUMNS, config.out_csv)
        else:
            pd.DataFrame(rows, columns=SWEEP_COLUMNS).to_csv(
                sys.stdout, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
            )
        return 0

    dim = SphereDim(config.k)
    field = resolve_field(config.field, dim)
    validate_field(field, np.random.default_rng(config.seed))
    q = config.quadrature()
    dom = resolve_domain(config.domain, field.dim, q)

    functionals: List[FunctionalResult] = []
    reports: List[VerificationReport] = []
    if config.command == "volume":
        functionals.append(volume_of_field(field, dom, q, config.gram, config.n_jobs))
    elif config.command == "energy":
        functionals.append(energy_of_field(field, dom, q, config.n_jobs))
    elif config.command == "flux":
        functionals.append(flux(field, dom, q, config.n_jobs))
    elif config.command == "pushforward":
        functionals += [pushforward_volume(field, dom, q, t, config.n_jobs) for t in config.t]
    elif config.command == "pvp":
        for t in config.t:
            pvp = assess_pvp(field, dom, q, t, config.n_jobs)
            functionals += [pvp.pushforward, pvp.domain_volume]
            print(f"pvp_ratio\t{field.label}\t{dom.label}\t{CSV_FLOAT_FORMAT % t}\t{CSV_FLOAT_FORMAT % pvp.ratio}")
    elif config.command == "verify":
        reports = run_suite(
            config.suite,
            field,
            dom,
            q,
            config.t,
            torus_delta(config.domain),
            config.tolerance,
            config.gram,
            config.n_jobs,
        )

    for r in functionals:
        if config.command != "pvp":
            _print_functional(r)
    for report in reports:
        print(f"{report.check_id}\t{report.field_label}\t{report.domain_label}\t{report.status.value}")

    if config.out_json:
        write_json(build_run_report(config.echo(), reports, functionals), config.out_json)
    if config.out_csv:
        if reports:
            write_csv(reports, config.out_csv)
        else:
            write_rows_csv([_functional_row(r) for r in functionals], FUNCTIONAL_COLUMNS, config.out_csv)
    return 1 if any(r.red_flag for r in reports) else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args)
        return execute(config)
    except (UnitFieldLabError, ValidationError, np.linalg.LinAlgError) as e:
        logger.error(f"{type(e).__name__}: {e}", extra={"extra_data": {"command": args.command}})
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
