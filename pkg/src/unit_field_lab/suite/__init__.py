from unit_field_lab.suite.checks import (  # noqa: F401
    check_dichotomy,
    check_divergence_closure,
    check_sigma2_integral,
    check_sphere_lower_bounds,
    check_hopf_minimality,
    check_solenoidal_energy,
)
from unit_field_lab.suite.export import build_run_report, read_json, report_rows, write_csv, write_json  # noqa: F401
from unit_field_lab.suite.functionals import (  # noqa: F401
    PvpAssessment,
    assess_pvp,
    domain_volume_of,
    energy_of_field,
    flux,
    jacobian_crosscheck,
    pushforward_volume,
    pvp_ratio,
    sigma_integral,
    volume_of_field,
)
from unit_field_lab.suite.identities import check_algebraic_identities  # noqa: F401
from unit_field_lab.suite.runner import run_suite  # noqa: F401
