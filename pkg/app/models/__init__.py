# app/models/__init__.py
"""
Domain models for the BER Bayesian-network pipeline
"""
from .link_models import BITS_PER_SYMBOL, LinkScenario, TrialRecord
from .network_models import Cpt, CptRow, NetworkStructure, Posterior, Priors, ReferenceCpd
from .variable_models import DiscreteRecord, StateDef, VariableKind, VariableSpec

__all__ = [
    'BITS_PER_SYMBOL',
    'LinkScenario',
    'TrialRecord',
    'Cpt',
    'CptRow',
    'NetworkStructure',
    'Posterior',
    'Priors',
    'ReferenceCpd',
    'DiscreteRecord',
    'StateDef',
    'VariableKind',
    'VariableSpec',
]
