# app/services/channel/impairment_service.py - Doppler, co-channel interference and AWGN
"""
Flat-channel impairments applied to a unit-energy symbol stream (Es = 1, Eb = 1/k)

+inf is the "impairment off" sentinel for both ci_db and ebn0_db.
"""
import math
from enum import Enum

import numpy as np

from app.services.errors import ModemInputError


class DopplerModel(str, Enum):
    """RAMP: phase n*phi at symbol n (frequency offset). CONSTANT: one common rotation phi."""
    RAMP = "ramp"
    CONSTANT = "constant"


def apply_doppler(symbols: np.ndarray, phi: float, model: DopplerModel = DopplerModel.RAMP) -> np.ndarray:
    if not math.isfinite(phi):
        raise ModemInputError(f"Doppler phase must be finite, got {phi}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    if phi == 0:
        return symbols.copy()
    if DopplerModel(model) is DopplerModel.CONSTANT:
        return symbols * np.exp(1j * phi)
    n = np.arange(symbols.size)
    return symbols * np.exp(1j * phi * n)


def interference_power(ci_db: float) -> float:
    """Interferer power relative to unit signal power"""
    if ci_db == math.inf:
        return 0.0
    return 10.0 ** (-ci_db / 10.0)


def add_interference(symbols: np.ndarray, ci_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add an independent constant-envelope interferer with uniform phase to every symbol"""
    if math.isnan(ci_db) or ci_db == -math.inf:
        raise ModemInputError(f"C/I must be finite or +inf, got {ci_db}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    power = interference_power(ci_db)
    if power == 0.0:
        return symbols.copy()
    phase = rng.uniform(0.0, 2 * math.pi, size=symbols.size)
    return symbols + math.sqrt(power) * np.exp(1j * phase)


def noise_density(ebn0_db: float, bits_per_symbol: int) -> float:
    """N0 for unit symbol energy: N0 = 1 / (k * 10^(EbN0/10))"""
    if bits_per_symbol < 1:
        raise ModemInputError(f"bits_per_symbol must be >= 1, got {bits_per_symbol}")
    if ebn0_db == math.inf:
        return 0.0
    return 1.0 / (bits_per_symbol * 10.0 ** (ebn0_db / 10.0))


def add_noise(symbols: np.ndarray, ebn0_db: float, bits_per_symbol: int,
              rng: np.random.Generator) -> np.ndarray:
    """Add circularly symmetric complex Gaussian noise, variance N0/2 per quadrature"""
    if math.isnan(ebn0_db) or ebn0_db == -math.inf:
        raise ModemInputError(f"EbN0 must be finite or +inf, got {ebn0_db}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    n0 = noise_density(ebn0_db, bits_per_symbol)
    if n0 == 0.0:
        return symbols.copy()
    sigma = math.sqrt(n0 / 2.0)
    noise = rng.standard_normal(symbols.size) + 1j * rng.standard_normal(symbols.size)
    return symbols + sigma * noise


def theoretical_dbpsk_ber(ebn0_db):
    """Closed-form DBPSK bit error probability in AWGN: 0.5 * exp(-Eb/N0)"""
    ebn0 = 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)
    return 0.5 * np.exp(-ebn0)
