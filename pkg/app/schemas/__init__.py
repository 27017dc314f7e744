# schemas/__init__.py
from .cpt_schemas import (
    ComparisonReport,
    CptDocument,
    CptRowSchema,
    DopplerCheck,
    RowClass,
    RowComparison,
)
from .experiment_schemas import (
    DATASET_COLUMNS,
    DatasetRow,
    ExperimentConfig,
    SamplingMode,
    StateSchema,
    VariableSpecSchema,
)

__all__ = [
    'ComparisonReport',
    'CptDocument',
    'CptRowSchema',
    'DopplerCheck',
    'RowClass',
    'RowComparison',
    'DATASET_COLUMNS',
    'DatasetRow',
    'ExperimentConfig',
    'SamplingMode',
    'StateSchema',
    'VariableSpecSchema',
]
