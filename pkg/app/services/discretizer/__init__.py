# app/services/discretizer/__init__.py
from .discretization_service import (
    BER,
    CI,
    DOP_PHI,
    EBN0,
    MOD,
    RECORD_VARIABLES,
    default_variable_specs,
    discretize,
    discretize_dataset,
    discretize_record,
    specs_by_name,
)

__all__ = [
    'BER',
    'CI',
    'DOP_PHI',
    'EBN0',
    'MOD',
    'RECORD_VARIABLES',
    'default_variable_specs',
    'discretize',
    'discretize_dataset',
    'discretize_record',
    'specs_by_name',
]
