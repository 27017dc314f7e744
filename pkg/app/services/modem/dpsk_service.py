# app/services/modem/dpsk_service.py - Differential PSK modulation and demodulation
"""
DBPSK / DQPSK / D8PSK over unit-energy complex baseband symbols

Bit groups map to phase increments 2*pi*m/M through a binary reflected Gray code over the
increment index m. Symbol 0 of every burst is a phase-0 reference.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict

import numpy as np

from app.models.link_models import BITS_PER_SYMBOL
from app.services.errors import ModemInputError


def gray_code(index: np.ndarray) -> np.ndarray:
    """Binary reflected Gray code of each index"""
    return index ^ (index >> 1)


@dataclass(frozen=True)
class ModScheme:
    """A 2^k-ary DPSK scheme"""
    name: str
    bits_per_symbol: int

    @property
    def order(self) -> int:
        return 1 << self.bits_per_symbol

    @property
    def step(self) -> float:
        return 2 * math.pi / self.order

    @cached_property
    def increments(self) -> np.ndarray:
        """Phase increment of each index m: 2*pi*m/M"""
        return np.arange(self.order) * self.step

    @cached_property
    def index_to_value(self) -> np.ndarray:
        """Gray-coded k-bit group value emitted for increment index m"""
        return gray_code(np.arange(self.order))

    @cached_property
    def value_to_index(self) -> np.ndarray:
        """Increment index for each k-bit group value (inverse Gray map)"""
        inverse = np.empty(self.order, dtype=np.int64)
        inverse[self.index_to_value] = np.arange(self.order)
        return inverse

    @cached_property
    def bit_table(self) -> np.ndarray:
        """Row m holds the k bits (MSB first) of increment index m"""
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return ((self.index_to_value[:, None] >> shifts) & 1).astype(np.uint8)

    def increment_map(self) -> Dict[tuple, float]:
        """k-bit group -> phase increment"""
        return {tuple(int(b) for b in self.bit_table[m]): float(self.increments[m])
                for m in range(self.order)}


SCHEMES: Dict[str, ModScheme] = {
    name: ModScheme(name, k) for name, k in BITS_PER_SYMBOL.items()
}


def get_scheme(name: str) -> ModScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise ModemInputError(f"Unknown modulation {name!r}; expected one of {list(SCHEMES)}") from None


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ModemInputError("bit sequence must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ModemInputError("bit sequence may only contain 0 and 1")
    return arr.astype(np.uint8)


def modulate(bits, scheme: ModScheme) -> np.ndarray:
    """
    Differentially encode bits into len(bits)/k + 1 unit-modulus symbols

    The running phase is kept as an integer index modulo M so every symbol lands exactly
    on the M-PSK circle.
    """
    arr = _as_bits(bits)
    k = scheme.bits_per_symbol
    if arr.size % k:
        raise ModemInputError(f"{arr.size} bits is not a multiple of {k} for {scheme.name}")

    groups = arr.reshape(-1, k).astype(np.int64)
    weights = 1 << np.arange(k - 1, -1, -1)
    index = scheme.value_to_index[groups @ weights]

    phase_index = np.concatenate(([0], np.cumsum(index) % scheme.order))
    return np.exp(1j * scheme.step * phase_index)


def decide_increments(relative_phase: np.ndarray, scheme: ModScheme) -> np.ndarray:
    """Nearest increment index on the circle; exact ties go to the smaller index"""
    position = np.mod(relative_phase, 2 * math.pi) / scheme.step
    index = np.ceil(position - 0.5).astype(np.int64) % scheme.order
    # halfway between M-1 and M (== 0): the smaller index is 0
    index[position == scheme.order - 0.5] = 0
    return index


def demodulate(symbols, scheme: ModScheme) -> np.ndarray:
    """Differential detection on arg(y[n] * conj(y[n-1]))"""
    y = np.asarray(symbols, dtype=np.complex128)
    if y.ndim != 1 or y.size < 2:
        raise ModemInputError("at least 2 symbols are required for differential detection")

    relative_phase = np.angle(y[1:] * np.conj(y[:-1]))
    index = decide_increments(relative_phase, scheme)
    return scheme.bit_table[index].reshape(-1)


def count_bit_errors(sent, received) -> int:
    """Hamming distance between two equal-length bit sequences"""
    a = np.asarray(sent)
    b = np.asarray(received)
    if a.shape != b.shape:
        raise ModemInputError(f"length mismatch: {a.size} sent vs {b.size} received")
    return int(np.count_nonzero(a != b))
