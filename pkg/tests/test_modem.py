import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from app.services.errors import ModemInputError
from app.services.modem import (
    SCHEMES,
    count_bit_errors,
    decide_increments,
    demodulate,
    get_scheme,
    gray_code,
    modulate,
)


def test_gray_code_for_eight_phases():
    assert list(gray_code(np.arange(8))) == [0, 1, 3, 2, 6, 7, 5, 4]


@pytest.mark.parametrize("name", list(SCHEMES))
def test_adjacent_increments_differ_in_one_bit(name):
    scheme = get_scheme(name)
    table = scheme.bit_table
    for m in range(scheme.order):
        neighbour = table[(m + 1) % scheme.order]
        assert np.count_nonzero(table[m] != neighbour) == 1


def test_dqpsk_increment_map():
    mapping = get_scheme("DQPSK").increment_map()
    assert mapping[(0, 0)] == 0.0
    assert mapping[(0, 1)] == pytest.approx(math.pi / 2)
    assert mapping[(1, 1)] == pytest.approx(math.pi)
    assert mapping[(1, 0)] == pytest.approx(3 * math.pi / 2)


def test_dbpsk_symbols():
    symbols = modulate([0, 1, 1], get_scheme("DBPSK"))
    np.testing.assert_allclose(symbols, [1, 1, -1, 1], atol=1e-12)


@pytest.mark.parametrize("name", list(SCHEMES))
def test_modulate_shape_and_reference_symbol(name):
    scheme = get_scheme(name)
    bits = np.random.default_rng(1).integers(0, 2, 30 * scheme.bits_per_symbol)
    symbols = modulate(bits, scheme)
    assert symbols.size == 31
    assert symbols[0] == 1
    np.testing.assert_allclose(np.abs(symbols), 1.0)


@hyp_settings(max_examples=40, deadline=None)
@given(name=st.sampled_from(list(SCHEMES)), n_symbols=st.integers(1, 3333),
       seed=st.integers(0, 2**32 - 1))
def test_noiseless_round_trip(name, n_symbols, seed):
    scheme = get_scheme(name)
    bits = np.random.default_rng(seed).integers(0, 2, n_symbols * scheme.bits_per_symbol)
    received = demodulate(modulate(bits, scheme), scheme)
    assert count_bit_errors(bits, received) == 0


@hyp_settings(max_examples=25, deadline=None)
@given(name=st.sampled_from(list(SCHEMES)), theta=st.floats(-math.pi, math.pi))
def test_common_rotation_is_invisible_to_differential_detection(name, theta):
    scheme = get_scheme(name)
    bits = np.random.default_rng(3).integers(0, 2, 300 * scheme.bits_per_symbol)
    rotated = modulate(bits, scheme) * np.exp(1j * theta)
    assert count_bit_errors(bits, demodulate(rotated, scheme)) == 0


def test_exact_tie_goes_to_smaller_increment():
    scheme = get_scheme("DQPSK")
    assert list(decide_increments(np.array([scheme.step / 2]), scheme)) == [0]


def test_input_errors():
    with pytest.raises(ModemInputError):
        modulate([0, 1, 1], get_scheme("DQPSK"))
    with pytest.raises(ModemInputError):
        modulate([0, 2], get_scheme("DBPSK"))
    with pytest.raises(ModemInputError):
        demodulate(np.array([1 + 0j]), get_scheme("DBPSK"))
    with pytest.raises(ModemInputError):
        count_bit_errors([0, 1], [0])
    with pytest.raises(ModemInputError):
        get_scheme("QAM16")


def test_count_bit_errors():
    assert count_bit_errors([0, 1, 1, 0], [1, 1, 0, 0]) == 2
