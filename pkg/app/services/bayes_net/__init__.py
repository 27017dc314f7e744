# app/services/bayes_net/__init__.py
from .file_service import FileService
from .inference_service import (
    BayesNet,
    infer_posterior,
    joint_probability,
    joint_table,
    network_state_spaces,
    set_priors,
    uniform_priors,
)
from .learning_service import CountTable, count_records, learn_cpt
from .structure_service import build_structure, default_structure, topological_order, validate_structure

__all__ = [
    'FileService',
    'BayesNet',
    'infer_posterior',
    'joint_probability',
    'joint_table',
    'network_state_spaces',
    'set_priors',
    'uniform_priors',
    'CountTable',
    'count_records',
    'learn_cpt',
    'build_structure',
    'default_structure',
    'topological_order',
    'validate_structure',
]
