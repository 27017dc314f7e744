# utils/response_formatter.py - Response Utilities
"""
Utilities for formatting pipeline results for the console (tables) and for --json output
"""
import json
from typing import Any, Dict, Iterable, Optional

from prettytable import PrettyTable

from app.models.network_models import Posterior
from app.schemas.cpt_schemas import ComparisonReport, DopplerCheck


def create_success_response(message: str, data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Create a standardized success response (no timestamps: output must be reproducible)"""
    return {
        "success": True,
        "message": message,
        "data": data,
    }


def create_error_response(error_type: str, message: str, details: Optional[str] = None) -> Dict[str, Any]:
    """Create a standardized error response"""
    return {
        "success": False,
        "error_type": error_type,
        "message": message,
        "details": details,
    }


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2)


def format_posterior_table(posterior: Posterior, precision: int = 4) -> str:
    """Posterior of every variable that is not part of the evidence"""
    table = PrettyTable()
    table.field_names = ["Variable", "State", "Probability"]
    table.align["Variable"] = "l"
    table.align["State"] = "l"
    table.align["Probability"] = "r"
    for variable, states in posterior.states.items():
        if variable in posterior.evidence:
            continue
        for state, p in zip(states, posterior.probs[variable]):
            table.add_row([variable, state, f"{p:.{precision}f}"])
        table.add_divider()
    return table.get_string()


def format_comparison_table(report: ComparisonReport, failures_only: bool = False) -> str:
    table = PrettyTable()
    table.field_names = report.parents + ["Class", "Learned", "Reference", "TV", "Limit", "Result"]
    table.align["Learned"] = "l"
    table.align["Reference"] = "l"
    for row in report.rows:
        if failures_only and row.passed:
            continue
        table.add_row(row.parent_states + [
            row.row_class.value,
            " ".join(f"{p:.3f}" for p in row.learned),
            " ".join(f"{p:.3f}" for p in row.reference),
            f"{row.distance:.4f}",
            f"{row.threshold:.2f}",
            "✅" if row.passed else "❌",
        ])
    return table.get_string()


def format_doppler_table(checks: Iterable[DopplerCheck]) -> str:
    table = PrettyTable()
    table.field_names = ["MOD", "Row", "p(low phi)", "p(high phi)", "Difference", "Required", "Result"]
    for check in checks:
        table.add_row([
            check.modulation,
            f"{check.ebn0_state} {check.ci_state} {check.low_phi_state}/{check.high_phi_state}",
            f"{check.p_low_phi:.3f}",
            f"{check.p_high_phi:.3f}",
            f"{check.difference:+.3f}",
            f"{check.required:.2f}",
            "✅" if check.passed else "⚠️",
        ])
    return table.get_string()


def comparison_summary(report: ComparisonReport) -> Dict[str, Any]:
    """Aggregates of a comparison report, without the per-row detail"""
    return {
        "rows": len(report.rows),
        "failed_rows": len(report.failed_rows),
        "max_distance": report.max_distance,
        "mean_distance": report.mean_distance,
        "degenerate_threshold": report.degenerate_threshold,
        "interior_threshold": report.interior_threshold,
        "passed": report.passed,
    }
