# app/services/experiment/comparison_service.py - Learned CPT vs reference rows
import logging
import math
from typing import Iterable, List, Optional, Sequence, Union

from app.config.settings import settings
from app.models.network_models import REFERENCE_TOLERANCE, Cpt, ReferenceCpd
from app.schemas.cpt_schemas import ComparisonReport, DopplerCheck, RowClass, RowComparison
from app.services.discretizer.discretization_service import CI, DOP_PHI, EBN0, MOD
from app.services.errors import CptKeyMismatchError

logger = logging.getLogger(__name__)

DOPPLER_CHECK_MIN_DIFFERENCE = 0.2


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    """0.5 * sum |p_i - q_i|"""
    if len(p) != len(q):
        raise CptKeyMismatchError(f"distributions of length {len(p)} and {len(q)}")
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p, q))


def classify_row(reference: Sequence[float]) -> RowClass:
    if max(reference) >= 1.0 - REFERENCE_TOLERANCE:
        return RowClass.DEGENERATE
    return RowClass.INTERIOR


def compare_cpt(learned: Union[Cpt, ReferenceCpd], reference: ReferenceCpd,
                degenerate_threshold: Optional[float] = None,
                interior_threshold: Optional[float] = None) -> ComparisonReport:
    """
    Per-row total variation distance for every reference row

    A row passes when its distance is at most the threshold of its class. Every reference
    row must exist in `learned` and both tables must share child, parents and child states.
    """
    degenerate_threshold = (settings.validation.DEGENERATE_THRESHOLD
                            if degenerate_threshold is None else degenerate_threshold)
    interior_threshold = (settings.validation.INTERIOR_THRESHOLD
                          if interior_threshold is None else interior_threshold)

    if (learned.child, tuple(learned.parents)) != (reference.child, tuple(reference.parents)):
        raise CptKeyMismatchError(
            f"learned CPT is {learned.child} | {list(learned.parents)}, "
            f"reference is {reference.child} | {list(reference.parents)}"
        )
    if tuple(learned.child_states) != tuple(reference.child_states):
        raise CptKeyMismatchError(
            f"child states differ: {list(learned.child_states)} vs {list(reference.child_states)}"
        )

    learned_probs = learned.probabilities
    missing = [key for key in reference.rows if key not in learned_probs]
    if missing:
        raise CptKeyMismatchError(f"{len(missing)} reference rows absent from the learned CPT, "
                                  f"first {list(missing[0])}")

    rows: List[RowComparison] = []
    for key, ref_probs in reference.rows.items():
        row_class = classify_row(ref_probs)
        threshold = degenerate_threshold if row_class is RowClass.DEGENERATE else interior_threshold
        distance = total_variation(learned_probs[key], ref_probs)
        n, observed = None, True
        if isinstance(learned, Cpt):
            n, observed = learned.rows[key].n, learned.rows[key].observed
        rows.append(RowComparison(
            parent_states=list(key),
            learned=list(learned_probs[key]),
            reference=list(ref_probs),
            distance=distance,
            row_class=row_class,
            threshold=threshold,
            passed=distance <= threshold,
            n=n,
            observed=observed,
        ))

    distances = [r.distance for r in rows]
    report = ComparisonReport(
        child=reference.child,
        parents=list(reference.parents),
        child_states=list(reference.child_states),
        degenerate_threshold=degenerate_threshold,
        interior_threshold=interior_threshold,
        rows=rows,
        max_distance=max(distances, default=0.0),
        mean_distance=math.fsum(distances) / len(distances) if distances else 0.0,
    )
    logger.info(f"📊 Compared {len(rows)} rows: max TV {report.max_distance:.4f}, "
                f"mean TV {report.mean_distance:.4f}, {len(report.failed_rows)} failed")
    return report


def doppler_sensitivity(table: Union[Cpt, ReferenceCpd], modulations: Iterable[str],
                        ebn0_state: str = "EbN0_6", ci_state: str = "C/I_3",
                        low_phi_state: str = "Phi_1", high_phi_state: str = "Phi_3",
                        required: float = DOPPLER_CHECK_MIN_DIFFERENCE) -> List[DopplerCheck]:
    """
    p(first child state) at the lowest minus at the highest Doppler state, per modulation

    Only meaningful for a table whose parents are (MOD, EbN0, C/I, Dop_Phi); modulations
    whose rows are missing are skipped.
    """
    if tuple(table.parents) != (MOD, EBN0, CI, DOP_PHI):
        return []
    probs = table.probabilities
    checks = []
    for modulation in modulations:
        low = probs.get((modulation, ebn0_state, ci_state, low_phi_state))
        high = probs.get((modulation, ebn0_state, ci_state, high_phi_state))
        if low is None or high is None:
            continue
        difference = low[0] - high[0]
        checks.append(DopplerCheck(
            modulation=modulation,
            ebn0_state=ebn0_state,
            ci_state=ci_state,
            low_phi_state=low_phi_state,
            high_phi_state=high_phi_state,
            p_low_phi=low[0],
            p_high_phi=high[0],
            difference=difference,
            required=required,
            passed=difference >= required,
        ))
    return checks
