# app/services/bayes_net/learning_service.py - Maximum likelihood CPT learning
"""
Learning is split in two steps so record batches can be counted independently:

    count_records(batch)  ->  CountTable   (merge() is associative and commutative)
    CountTable.to_cpt(pseudocount)  ->  Cpt
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.models.network_models import Cpt, CptRow, NetworkStructure
from app.models.variable_models import VariableSpec
from app.services.discretizer.discretization_service import default_variable_specs, specs_by_name
from app.services.errors import LearningError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountTable:
    """Child-state counts per parent combination, shape (*parent cardinalities, child cardinality)"""
    child: str
    parents: Tuple[str, ...]
    child_states: Tuple[str, ...]
    parent_states: Tuple[Tuple[str, ...], ...]
    counts: np.ndarray

    @classmethod
    def empty(cls, child: str, parents: Sequence[str], child_states: Sequence[str],
              parent_states: Sequence[Sequence[str]]) -> "CountTable":
        shape = tuple(len(s) for s in parent_states) + (len(child_states),)
        return cls(child, tuple(parents), tuple(child_states),
                   tuple(tuple(s) for s in parent_states), np.zeros(shape, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def merge(self, other: "CountTable") -> "CountTable":
        if (self.child, self.parents, self.child_states, self.parent_states) != \
                (other.child, other.parents, other.child_states, other.parent_states):
            raise LearningError("cannot merge count tables over different variables or states")
        return CountTable(self.child, self.parents, self.child_states, self.parent_states,
                          self.counts + other.counts)

    def to_cpt(self, pseudocount: float = 0.0) -> Cpt:
        """
        p(s | combo) = (count(s) + a) / (total + a * |child states|)

        A combination with no records and a == 0 gets the uniform row, flagged unobserved.
        """
        if pseudocount < 0 or not np.isfinite(pseudocount):
            raise LearningError(f"pseudocount must be a finite value >= 0, got {pseudocount}")

        k = len(self.child_states)
        flat = self.counts.reshape(-1, k)
        keys = itertools.product(*self.parent_states)
        rows: Dict[Tuple[str, ...], CptRow] = {}
        for key, counts in zip(keys, flat):
            n = int(counts.sum())
            if n == 0 and pseudocount == 0:
                probs = tuple(1.0 / k for _ in range(k))
            else:
                denom = n + pseudocount * k
                probs = tuple(float((c + pseudocount) / denom) for c in counts)
            rows[key] = CptRow(probs=probs, n=n, observed=n > 0)

        cpt = Cpt(self.child, self.parents, self.child_states, self.parent_states, rows)
        if cpt.unobserved_count:
            logger.warning(f"⚠️ {cpt.unobserved_count}/{len(rows)} CPT rows have no records")
        return cpt


def _state_spaces(structure: NetworkStructure, child: str,
                  specs: Mapping[str, VariableSpec]) -> Tuple[Tuple[str, ...], Tuple[Tuple[str, ...], ...]]:
    if child not in structure.nodes:
        raise LearningError(f"{child!r} is not a node of the structure")
    parents = structure.parents_of(child)
    for name in (child,) + parents:
        if name not in specs:
            raise LearningError(f"no variable spec for {name!r}")
    return specs[child].state_names, tuple(specs[p].state_names for p in parents)


def count_records(records: Iterable[Mapping[str, str]], structure: NetworkStructure, child: str,
                  specs: Optional[Iterable[VariableSpec]] = None) -> CountTable:
    """Tally child states per parent combination"""
    by_name = specs_by_name(default_variable_specs() if specs is None else specs)
    child_states, parent_states = _state_spaces(structure, child, by_name)
    parents = structure.parents_of(child)
    table = CountTable.empty(child, parents, child_states, parent_states)

    index = {name: {s: i for i, s in enumerate(by_name[name].state_names)}
             for name in (child,) + parents}
    for record in records:
        position = []
        for name in parents + (child,):
            try:
                state = record[name]
            except KeyError:
                raise LearningError(f"record {dict(record)} has no value for {name!r}") from None
            try:
                position.append(index[name][state])
            except KeyError:
                raise LearningError(f"{name}: unknown state {state!r}") from None
        table.counts[tuple(position)] += 1
    return table


def learn_cpt(records: Iterable[Mapping[str, str]], structure: NetworkStructure, child: str,
              pseudocount: float = 0.0, specs: Optional[Iterable[VariableSpec]] = None) -> Cpt:
    """Maximum likelihood CPT of `child`, optionally smoothed by `pseudocount`"""
    table = count_records(records, structure, child, specs)
    n_rows = table.counts.size // len(table.child_states)
    logger.info(f"📊 Counted {table.total} records for {child} over {n_rows} parent combinations")
    return table.to_cpt(pseudocount)
