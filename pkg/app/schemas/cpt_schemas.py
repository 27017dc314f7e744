# schemas/cpt_schemas.py
"""
Pydantic schemas for the CPT document and the CPT comparison report
"""
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.network_models import Cpt, CptRow, ReferenceCpd


class CptRowSchema(BaseModel):
    """One parent combination of a CPT document"""
    model_config = ConfigDict(extra="forbid")

    parent_states: List[str]
    probs: List[float]
    n: int = Field(default=0, ge=0, description="Records behind the row")
    observed: bool = True


class CptDocument(BaseModel):
    """
    Schema for a serialized CPT

    Parent state spaces are not stored; they are read off the rows in first-appearance order.
    """
    model_config = ConfigDict(extra="forbid")

    child: str
    parents: List[str]
    child_states: List[str] = Field(min_length=2)
    rows: List[CptRowSchema]

    @model_validator(mode="after")
    def _check_rows(self):
        seen = set()
        for row in self.rows:
            key = tuple(row.parent_states)
            if len(key) != len(self.parents):
                raise ValueError(f"row {list(key)} does not match parents {self.parents}")
            if len(row.probs) != len(self.child_states):
                raise ValueError(f"row {list(key)} has {len(row.probs)} probabilities, "
                                 f"expected {len(self.child_states)}")
            if key in seen:
                raise ValueError(f"duplicate row {list(key)}")
            seen.add(key)
        return self

    def parent_state_spaces(self) -> Tuple[Tuple[str, ...], ...]:
        spaces: List[Dict[str, None]] = [{} for _ in self.parents]
        for row in self.rows:
            for space, state in zip(spaces, row.parent_states):
                space.setdefault(state, None)
        return tuple(tuple(space) for space in spaces)

    @property
    def is_complete(self) -> bool:
        """True when the rows cover every combination of the parent state spaces"""
        total = 1
        for space in self.parent_state_spaces():
            total *= len(space)
        return len(self.rows) == total

    def to_cpt(self) -> Cpt:
        rows = {tuple(r.parent_states): CptRow(tuple(r.probs), r.n, r.observed) for r in self.rows}
        return Cpt(
            child=self.child,
            parents=tuple(self.parents),
            child_states=tuple(self.child_states),
            parent_states=self.parent_state_spaces(),
            rows=rows,
        )

    def to_reference(self) -> ReferenceCpd:
        return ReferenceCpd(
            child=self.child,
            parents=tuple(self.parents),
            child_states=tuple(self.child_states),
            rows={tuple(r.parent_states): tuple(r.probs) for r in self.rows},
        )

    @classmethod
    def from_cpt(cls, cpt: Cpt) -> "CptDocument":
        return cls(
            child=cpt.child,
            parents=list(cpt.parents),
            child_states=list(cpt.child_states),
            rows=[
                CptRowSchema(parent_states=list(key), probs=list(cpt.rows[key].probs),
                             n=cpt.rows[key].n, observed=cpt.rows[key].observed)
                for key in cpt.row_keys()
            ],
        )


class RowClass(str, Enum):
    """Reference rows with a probability-1 entry are degenerate, the rest interior"""
    DEGENERATE = "degenerate"
    INTERIOR = "interior"


class RowComparison(BaseModel):
    """Distance between one learned row and its reference row"""
    parent_states: List[str]
    learned: List[float]
    reference: List[float]
    distance: float
    row_class: RowClass
    threshold: float
    passed: bool
    n: Optional[int] = None
    observed: bool = True


class DopplerCheck(BaseModel):
    """p(first BER state) at the lowest minus the highest Doppler state, for one modulation"""
    modulation: str
    ebn0_state: str
    ci_state: str
    low_phi_state: str
    high_phi_state: str
    p_low_phi: float
    p_high_phi: float
    difference: float
    required: float
    passed: bool


class ComparisonReport(BaseModel):
    """Per-row total variation distances plus aggregates"""
    child: str
    parents: List[str]
    child_states: List[str]
    degenerate_threshold: float
    interior_threshold: float
    rows: List[RowComparison] = Field(default_factory=list)
    max_distance: float = 0.0
    mean_distance: float = 0.0
    doppler_checks: List[DopplerCheck] = Field(default_factory=list)

    @property
    def failed_rows(self) -> List[RowComparison]:
        return [r for r in self.rows if not r.passed]

    @property
    def passed(self) -> bool:
        """Pass/fail of the configured row thresholds (Doppler checks are informational)"""
        return not self.failed_rows
