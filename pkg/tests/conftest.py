import pytest

from app.schemas.experiment_schemas import ExperimentConfig
from app.services.bayes_net.structure_service import default_structure
from app.services.discretizer.discretization_service import default_variable_specs


@pytest.fixture
def specs():
    return default_variable_specs()


@pytest.fixture
def spec_map(specs):
    return {spec.name: spec for spec in specs}


@pytest.fixture
def structure():
    return default_structure()


@pytest.fixture
def tiny_config():
    """Two trials of 100 bits per combination: 648 fast trials"""
    return ExperimentConfig(trials_per_combo=2, bits_per_trial=100, master_seed=7)
