# models/network_models.py
"""
Bayesian network models: structure, conditional probability tables, priors and posteriors
"""
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Mapping, Tuple

import numpy as np

from app.services.errors import CptFormatError, PriorError

NORMALIZATION_TOLERANCE = 1e-9
REFERENCE_TOLERANCE = 1e-3  # published values are rounded

StateCombo = Tuple[str, ...]


def check_distribution(probs, tolerance: float, what: str, error=CptFormatError) -> None:
    """Raise `error` unless probs are non-negative and sum to 1 within tolerance"""
    if any(p < 0 or math.isnan(p) for p in probs):
        raise error(f"{what}: negative or NaN probability in {list(probs)}")
    total = math.fsum(probs)
    if abs(total - 1.0) > tolerance:
        raise error(f"{what}: probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class NetworkStructure:
    """DAG over named variables; edge order fixes the parent order of each child"""
    nodes: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]

    def parents_of(self, child: str) -> Tuple[str, ...]:
        return tuple(p for p, c in self.edges if c == child)

    @property
    def roots(self) -> Tuple[str, ...]:
        children = {c for _, c in self.edges}
        return tuple(n for n in self.nodes if n not in children)


@dataclass(frozen=True)
class CptRow:
    """One parent combination: distribution over child states plus its sample count"""
    probs: Tuple[float, ...]
    n: int
    observed: bool


@dataclass(frozen=True)
class Cpt:
    """
    Conditional probability table of `child` given ordered `parents`

    rows holds every combination of parent states (product of the parent state spaces).
    """
    child: str
    parents: Tuple[str, ...]
    child_states: Tuple[str, ...]
    parent_states: Tuple[Tuple[str, ...], ...]
    rows: Dict[StateCombo, CptRow] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.parents) != len(self.parent_states):
            raise CptFormatError(f"CPT {self.child}: one state space per parent required")
        expected = math.prod(len(s) for s in self.parent_states)
        if len(self.rows) != expected:
            raise CptFormatError(
                f"CPT {self.child}: {len(self.rows)} rows, expected {expected}"
            )
        for key in self.row_keys():
            row = self.rows.get(key)
            if row is None:
                raise CptFormatError(f"CPT {self.child}: missing row {key}")
            if len(row.probs) != len(self.child_states):
                raise CptFormatError(f"CPT {self.child}: row {key} has wrong length")
            check_distribution(row.probs, NORMALIZATION_TOLERANCE, f"CPT {self.child} row {key}")

    def row_keys(self) -> Iterator[StateCombo]:
        """Parent combinations in canonical (row-major) order"""
        return itertools.product(*self.parent_states)

    def distribution(self, combo: StateCombo) -> Tuple[float, ...]:
        return self.rows[tuple(combo)].probs

    def probability(self, child_state: str, combo: StateCombo) -> float:
        return self.distribution(combo)[self.child_states.index(child_state)]

    @property
    def probabilities(self) -> Dict[StateCombo, Tuple[float, ...]]:
        return {key: row.probs for key, row in self.rows.items()}

    @property
    def unobserved_count(self) -> int:
        return sum(1 for row in self.rows.values() if not row.observed)

    def slice(self, variable: str, state: str) -> Dict[StateCombo, CptRow]:
        """Rows where parent `variable` is in `state` (e.g. the per-modulation tables)"""
        try:
            pos = self.parents.index(variable)
        except ValueError:
            raise CptFormatError(f"{variable} is not a parent of {self.child}") from None
        if state not in self.parent_states[pos]:
            raise CptFormatError(f"{variable} has no state {state!r}")
        return {key: row for key, row in self.rows.items() if key[pos] == state}

    def as_array(self) -> np.ndarray:
        """Table as an array of shape (*parent cardinalities, child cardinality)"""
        shape = tuple(len(s) for s in self.parent_states) + (len(self.child_states),)
        table = np.array([self.rows[key].probs for key in self.row_keys()], dtype=float)
        return table.reshape(shape)


@dataclass(frozen=True)
class ReferenceCpd:
    """Published CPT rows (a subset of the full table); vectors are rounded"""
    child: str
    parents: Tuple[str, ...]
    child_states: Tuple[str, ...]
    rows: Dict[StateCombo, Tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for key, probs in self.rows.items():
            if len(key) != len(self.parents):
                raise CptFormatError(f"Reference row {key} does not match parents {self.parents}")
            if len(probs) != len(self.child_states):
                raise CptFormatError(f"Reference row {key} has wrong length")
            check_distribution(probs, REFERENCE_TOLERANCE, f"Reference row {key}")

    @property
    def probabilities(self) -> Dict[StateCombo, Tuple[float, ...]]:
        return dict(self.rows)


@dataclass(frozen=True)
class Priors:
    """Distributions over the states of the root variables"""
    states: Dict[str, Tuple[str, ...]]
    probs: Dict[str, Tuple[float, ...]]

    def __post_init__(self):
        for name, probs in self.probs.items():
            if len(probs) != len(self.states.get(name, ())):
                raise PriorError(f"Prior for {name}: length does not match its states")
            check_distribution(probs, NORMALIZATION_TOLERANCE, f"Prior for {name}", PriorError)

    def distribution(self, variable: str) -> Tuple[float, ...]:
        return self.probs[variable]


@dataclass(frozen=True)
class Posterior:
    """Per-variable posterior distributions given the evidence"""
    states: Dict[str, Tuple[str, ...]]
    probs: Dict[str, Tuple[float, ...]]
    evidence: Dict[str, str] = field(default_factory=dict)
    unobserved_rows: int = 0

    def distribution(self, variable: str) -> Dict[str, float]:
        return dict(zip(self.states[variable], self.probs[variable]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "evidence": dict(self.evidence),
            "posteriors": {name: self.distribution(name)
                           for name in self.probs if name not in self.evidence},
            "unobserved_rows": self.unobserved_rows,
        }
