"""JSON and CSV report files."""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd

from unit_field_lab.constants import CSV_FLOAT_FORMAT, SCHEMA_VERSION
from unit_field_lab.log import get_logger
from unit_field_lab.models import FunctionalResult, Relation, RunReport, VerificationReport

logger = get_logger(__name__)

CSV_COLUMNS = ["check_id", "field", "domain", "t", "hypothesis_pass", "lhs", "rhs", "margin", "pass"]


def build_run_report(
    config: Mapping[str, Any],
    reports: Sequence[VerificationReport] = (),
    functionals: Sequence[FunctionalResult] = (),
) -> RunReport:
    return RunReport(
        schema_version=SCHEMA_VERSION,
        generated_at=datetime.now(timezone.utc).isoformat(),
        config=dict(config),
        reports=list(reports),
        functionals=list(functionals),
    )


def _format_t(values: Sequence[float]) -> str:
    return ";".join(CSV_FLOAT_FORMAT % t for t in values)


def _binding(report: VerificationReport) -> Optional[Relation]:
    """The conclusion closest to failing, the one a reader checks first."""
    if not report.conclusions:
        return None
    return min(report.conclusions, key=lambda r: r.margin)


def report_rows(reports: Sequence[VerificationReport]) -> List[Dict[str, Any]]:
    rows = []
    for report in reports:
        binding = _binding(report)
        rows.append(
            {
                "check_id": report.check_id,
                "field": report.field_label,
                "domain": report.domain_label,
                "t": _format_t(report.t_values),
                "hypothesis_pass": report.hypotheses_passed,
                "lhs": binding.lhs if binding else math.nan,
                "rhs": binding.rhs if binding else math.nan,
                "margin": binding.margin if binding else math.nan,
                "pass": report.status.value == "passed",
            }
        )
    return rows


def _write_frame(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def write_csv(reports: Sequence[VerificationReport], path: Union[str, Path]) -> Path:
    path = _write_frame(pd.DataFrame(report_rows(reports), columns=CSV_COLUMNS), path)
    logger.info(f"Wrote {len(reports)} report rows", extra={"extra_data": {"path": str(path)}})
    return path


def write_rows_csv(rows: Sequence[Mapping[str, Any]], columns: Sequence[str], path: Union[str, Path]) -> Path:
    path = _write_frame(pd.DataFrame(list(rows), columns=list(columns)), path)
    logger.info(f"Wrote {len(rows)} rows", extra={"extra_data": {"path": str(path)}})
    return path


def write_json(run: RunReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(run.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote run report", extra={"extra_data": {"path": str(path), "reports": len(run.reports)}})
    return path


def read_json(path: Union[str, Path]) -> RunReport:
    return RunReport.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))
