# app/services/channel/__init__.py
from .impairment_service import (
    DopplerModel,
    add_interference,
    add_noise,
    apply_doppler,
    interference_power,
    noise_density,
    theoretical_dbpsk_ber,
)
from .trial_service import run_trial, trial_rng

__all__ = [
    'DopplerModel',
    'add_interference',
    'add_noise',
    'apply_doppler',
    'interference_power',
    'noise_density',
    'theoretical_dbpsk_ber',
    'run_trial',
    'trial_rng',
]
