# app/services/bayes_net/inference_service.py - Exact inference by enumeration over the joint
"""
The joint distribution is materialized as one numpy array with an axis per node (in
`structure.nodes` order). The default network has 3*6*6*3*5 = 1620 entries, so enumerating
it is exact and fast.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.models.network_models import Cpt, NetworkStructure, Posterior, Priors
from app.services.bayes_net.structure_service import validate_structure
from app.services.errors import CptFormatError, EvidenceError, ImpossibleEvidenceError, PriorError

logger = logging.getLogger(__name__)

StateSpaces = Dict[str, Tuple[str, ...]]


def network_state_spaces(structure: NetworkStructure, cpts: Mapping[str, Cpt]) -> StateSpaces:
    """
    State names of every node, read off the CPTs

    A child takes its states from its own CPT, a root from the CPTs it is a parent in.
    Every CPT must agree on the states of a shared variable.
    """
    spaces: StateSpaces = {}

    def record(name: str, states: Sequence[str], where: str):
        states = tuple(states)
        if name in spaces and spaces[name] != states:
            raise CptFormatError(f"{where}: states of {name} {list(states)} "
                                 f"disagree with {list(spaces[name])}")
        spaces[name] = states

    for node in structure.nodes:
        parents = structure.parents_of(node)
        if not parents:
            continue
        cpt = cpts.get(node)
        if cpt is None:
            raise CptFormatError(f"no CPT for {node}")
        if cpt.parents != parents:
            raise CptFormatError(f"CPT {node}: parents {list(cpt.parents)} do not match the "
                                 f"structure's {list(parents)}")
        record(node, cpt.child_states, f"CPT {node}")
        for parent, states in zip(cpt.parents, cpt.parent_states):
            record(parent, states, f"CPT {node}")

    missing = [n for n in structure.nodes if n not in spaces]
    if missing:
        raise CptFormatError(f"no CPT defines the states of {missing}")
    return {name: spaces[name] for name in structure.nodes}


def uniform_priors(structure: NetworkStructure, cpts: Mapping[str, Cpt]) -> Priors:
    """Uniform distribution over the states of every root"""
    spaces = network_state_spaces(structure, cpts)
    roots = structure.roots
    return Priors(
        states={r: spaces[r] for r in roots},
        probs={r: tuple(1.0 / len(spaces[r]) for _ in spaces[r]) for r in roots},
    )


def set_priors(priors: Priors, variable: str, distribution: Sequence[float]) -> Priors:
    """Copy of `priors` with the distribution of root `variable` replaced"""
    if variable not in priors.states:
        raise PriorError(f"{variable!r} is not a root variable; roots are {list(priors.states)}")
    probs = dict(priors.probs)
    probs[variable] = tuple(float(p) for p in distribution)
    return replace(priors, probs=probs)


def _check_priors(structure: NetworkStructure, priors: Priors, spaces: StateSpaces):
    for root in structure.roots:
        if root not in priors.probs:
            raise PriorError(f"no prior for root {root}")
        if tuple(priors.states[root]) != spaces[root]:
            raise PriorError(f"prior states of {root} do not match the CPT states")


def joint_probability(assignment: Mapping[str, str], structure: NetworkStructure,
                      cpts: Mapping[str, Cpt], priors: Priors) -> float:
    """Product of root priors and child CPT entries under a full assignment"""
    missing = [n for n in structure.nodes if n not in assignment]
    if missing:
        raise EvidenceError(f"assignment is missing {missing}")

    p = 1.0
    for node in structure.nodes:
        parents = structure.parents_of(node)
        if parents:
            combo = tuple(assignment[parent] for parent in parents)
            try:
                p *= cpts[node].probability(assignment[node], combo)
            except (KeyError, ValueError):
                raise EvidenceError(f"assignment {dict(assignment)} has an unknown state") from None
        else:
            try:
                p *= priors.probs[node][priors.states[node].index(assignment[node])]
            except (KeyError, ValueError):
                raise EvidenceError(f"{node}: unknown state {assignment[node]!r}") from None
    return p


def _on_axes(factor: np.ndarray, axes: Sequence[int], n_axes: int) -> np.ndarray:
    """Transpose and reshape a factor so it broadcasts against the full joint"""
    order = np.argsort(axes)
    factor = np.transpose(factor, order)
    shape = [1] * n_axes
    for axis, size in zip(np.asarray(axes)[order], factor.shape):
        shape[axis] = size
    return factor.reshape(shape)


def joint_table(structure: NetworkStructure, cpts: Mapping[str, Cpt], priors: Priors) -> np.ndarray:
    """Full joint as an array with one axis per node"""
    axis = {name: i for i, name in enumerate(structure.nodes)}
    n = len(structure.nodes)
    joint = np.ones((1,) * n)
    for node in structure.nodes:
        parents = structure.parents_of(node)
        if parents:
            factor = cpts[node].as_array()
            joint = joint * _on_axes(factor, [axis[p] for p in parents] + [axis[node]], n)
        else:
            joint = joint * _on_axes(np.asarray(priors.probs[node], dtype=float), [axis[node]], n)
    return joint


def _validate_evidence(evidence: Mapping[str, str], spaces: StateSpaces):
    for name, state in evidence.items():
        if name not in spaces:
            raise EvidenceError(f"unknown variable {name!r}; expected one of {list(spaces)}")
        if state not in spaces[name]:
            raise EvidenceError(f"{name}: unknown state {state!r}; expected one of {list(spaces[name])}")


def infer_posterior(structure: NetworkStructure, cpts: Mapping[str, Cpt], priors: Priors,
                    evidence: Optional[Mapping[str, str]] = None) -> Posterior:
    """Exact posterior of every node given evidence; evidence nodes come back as point masses"""
    evidence = dict(evidence or {})
    validate_structure(structure)
    spaces = network_state_spaces(structure, cpts)
    _check_priors(structure, priors, spaces)
    _validate_evidence(evidence, spaces)

    nodes = list(structure.nodes)
    n = len(nodes)
    joint = joint_table(structure, cpts, priors)
    for name, state in evidence.items():
        mask = np.zeros(len(spaces[name]))
        mask[spaces[name].index(state)] = 1.0
        joint = joint * _on_axes(mask, [nodes.index(name)], n)

    total = float(joint.sum())
    if total <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has probability 0 under the model")

    probs: Dict[str, Tuple[float, ...]] = {}
    for i, name in enumerate(nodes):
        others = tuple(j for j in range(n) if j != i)
        marginal = joint.sum(axis=others)
        probs[name] = tuple(float(p) for p in marginal / marginal.sum())

    unobserved = _unobserved_rows_in_play(structure, cpts, joint, nodes)
    if unobserved:
        logger.warning(f"⚠️ Posterior depends on {unobserved} CPT rows learned from no records")
    return Posterior(states=spaces, probs=probs, evidence=evidence, unobserved_rows=unobserved)


def _unobserved_rows_in_play(structure: NetworkStructure, cpts: Mapping[str, Cpt],
                             joint: np.ndarray, nodes: List[str]) -> int:
    """Unobserved CPT rows whose parent combination keeps positive mass under the evidence"""
    count = 0
    for node in nodes:
        parents = structure.parents_of(node)
        if not parents:
            continue
        cpt = cpts[node]
        if not cpt.unobserved_count:
            continue
        keep = [nodes.index(p) for p in parents]
        mass = joint.sum(axis=tuple(j for j in range(len(nodes)) if j not in keep))
        # sum() leaves the kept axes in node order; put them in parent order
        mass = np.transpose(mass, np.argsort(np.argsort(keep)))
        for key in cpt.row_keys():
            if cpt.rows[key].observed:
                continue
            index = tuple(states.index(s) for states, s in zip(cpt.parent_states, key))
            if mass[index] > 0:
                count += 1
    return count


@dataclass(frozen=True)
class BayesNet:
    """A structure with its CPTs and root priors"""
    structure: NetworkStructure
    cpts: Dict[str, Cpt]
    priors: Priors

    @classmethod
    def from_cpts(cls, structure: NetworkStructure, cpts: Sequence[Cpt]) -> "BayesNet":
        """Build with uniform root priors"""
        validate_structure(structure)
        by_child = {cpt.child: cpt for cpt in cpts}
        return cls(structure, by_child, uniform_priors(structure, by_child))

    @property
    def state_spaces(self) -> StateSpaces:
        return network_state_spaces(self.structure, self.cpts)

    def with_prior(self, variable: str, distribution: Sequence[float]) -> "BayesNet":
        return replace(self, priors=set_priors(self.priors, variable, distribution))

    def joint_probability(self, assignment: Mapping[str, str]) -> float:
        return joint_probability(assignment, self.structure, self.cpts, self.priors)

    def infer(self, evidence: Optional[Mapping[str, str]] = None) -> Posterior:
        return infer_posterior(self.structure, self.cpts, self.priors, evidence)

    def total_probability(self) -> float:
        return math.fsum(joint_table(self.structure, self.cpts, self.priors).ravel())
