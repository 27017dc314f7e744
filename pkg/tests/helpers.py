"""Shared builders for the test suite"""
import itertools
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from app.models.network_models import Cpt, CptRow, NetworkStructure, Priors
from app.services.bayes_net.inference_service import joint_probability, network_state_spaces
from app.services.errors import ImpossibleEvidenceError


def make_cpt(child: str, parents: Sequence[str], child_states: Sequence[str],
             parent_states: Sequence[Sequence[str]], row_for) -> Cpt:
    """CPT whose row for each parent combination is row_for(combo)"""
    rows = {
        combo: CptRow(tuple(float(p) for p in row_for(combo)), n=1, observed=True)
        for combo in itertools.product(*parent_states)
    }
    return Cpt(child, tuple(parents), tuple(child_states),
               tuple(tuple(s) for s in parent_states), rows)


def random_cpt(rng: np.random.Generator, child: str, parents: Sequence[str],
               child_states: Sequence[str], parent_states: Sequence[Sequence[str]]) -> Cpt:
    def row(_combo):
        probs = rng.dirichlet(np.ones(len(child_states)))
        return probs / probs.sum()
    return make_cpt(child, parents, child_states, parent_states, row)


def random_priors(rng: np.random.Generator, states: Mapping[str, Sequence[str]]) -> Priors:
    probs = {}
    for name, names in states.items():
        p = rng.dirichlet(np.ones(len(names)))
        p[-1] = 1.0 - p[:-1].sum()
        probs[name] = tuple(float(x) for x in p)
    return Priors(states={k: tuple(v) for k, v in states.items()}, probs=probs)


def brute_force_posterior(structure: NetworkStructure, cpts: Mapping[str, Cpt], priors: Priors,
                          evidence: Optional[Mapping[str, str]] = None) -> Dict[str, Tuple[float, ...]]:
    """Posterior by looping joint_probability over every full assignment"""
    evidence = dict(evidence or {})
    spaces = network_state_spaces(structure, cpts)
    nodes = list(structure.nodes)
    sums = {name: [0.0] * len(spaces[name]) for name in nodes}
    total = 0.0
    for combo in itertools.product(*(spaces[name] for name in nodes)):
        assignment = dict(zip(nodes, combo))
        if any(assignment[k] != v for k, v in evidence.items()):
            continue
        p = joint_probability(assignment, structure, cpts, priors)
        total += p
        for name, state in assignment.items():
            sums[name][spaces[name].index(state)] += p
    if total <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    return {name: tuple(s / total for s in sums[name]) for name in nodes}
