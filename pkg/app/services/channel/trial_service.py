# app/services/channel/trial_service.py - One complete BER trial
import logging

import numpy as np

from app.models.link_models import LinkScenario, TrialRecord
from app.services.channel.impairment_service import (
    DopplerModel,
    add_interference,
    add_noise,
    apply_doppler,
)
from app.services.modem.dpsk_service import count_bit_errors, demodulate, get_scheme, modulate

logger = logging.getLogger(__name__)


def trial_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded through numpy's SeedSequence"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def run_trial(scenario: LinkScenario, doppler_model: DopplerModel = DopplerModel.RAMP) -> TrialRecord:
    """
    modulate -> Doppler -> interference -> noise -> demodulate -> count errors

    Draw order from the trial generator is fixed (bits, interferer phases, noise), so a
    scenario always yields the same record.
    """
    scheme = get_scheme(scenario.modulation)
    rng = trial_rng(scenario.seed)

    bits = rng.integers(0, 2, size=scenario.n_bits, dtype=np.uint8)
    symbols = modulate(bits, scheme)
    symbols = apply_doppler(symbols, scenario.dop_phi_rad, doppler_model)
    symbols = add_interference(symbols, scenario.ci_db, rng)
    symbols = add_noise(symbols, scenario.ebn0_db, scheme.bits_per_symbol, rng)
    received = demodulate(symbols, scheme)

    n_errors = count_bit_errors(bits, received)
    logger.debug(
        f"{scenario.modulation} EbN0={scenario.ebn0_db:.3f} dB C/I={scenario.ci_db:.3f} dB "
        f"phi={scenario.dop_phi_rad:.4f} rad -> {n_errors}/{scenario.n_bits} errors"
    )
    return TrialRecord(
        modulation=scenario.modulation,
        ebn0_db=scenario.ebn0_db,
        ci_db=scenario.ci_db,
        dop_phi_rad=scenario.dop_phi_rad,
        n_bits=scenario.n_bits,
        n_errors=n_errors,
    )
