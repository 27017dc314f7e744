import math

import pytest
from hypothesis import given, strategies as st

from app.models.link_models import TrialRecord
from app.models.variable_models import StateDef, VariableKind, VariableSpec
from app.services.discretizer import (
    BER,
    CI,
    DOP_PHI,
    EBN0,
    MOD,
    default_variable_specs,
    discretize,
    discretize_record,
)
from app.services.errors import DiscretizationRangeError, VariableSpecError


def test_default_state_names(spec_map):
    assert spec_map[EBN0].state_names == tuple(f"EbN0_{i}" for i in range(1, 7))
    assert spec_map[CI].state_names == tuple(f"C/I_{i}" for i in range(1, 7))
    assert spec_map[DOP_PHI].state_names == ("Phi_1", "Phi_2", "Phi_3")
    assert spec_map[BER].state_names == tuple(f"BER_{i}" for i in range(1, 6))
    assert spec_map[MOD].state_names == ("DBPSK", "DQPSK", "D8PSK")
    assert spec_map[MOD].kind is VariableKind.CATEGORICAL


@pytest.mark.parametrize("variable,value,expected", [
    (EBN0, -72.8, "EbN0_1"),
    (EBN0, -1e-9, "EbN0_1"),
    (EBN0, 0.0, "EbN0_2"),
    (EBN0, 12.999, "EbN0_3"),
    (EBN0, 19.0, "EbN0_6"),
    (EBN0, 109.1, "EbN0_6"),
    (CI, -159.0, "C/I_1"),
    (CI, 20.0, "C/I_3"),
    (CI, 50.0, "C/I_6"),
    (CI, 159.0, "C/I_6"),
    (DOP_PHI, 0.0, "Phi_1"),
    (DOP_PHI, 0.05, "Phi_2"),
    (DOP_PHI, 0.1, "Phi_3"),
    (DOP_PHI, 0.136, "Phi_3"),
    (BER, 0.0, "BER_1"),
    (BER, 9.99e-6, "BER_1"),
    (BER, 1e-5, "BER_2"),
    (BER, 1e-3, "BER_3"),
    (BER, 0.05, "BER_4"),
    (BER, 0.1, "BER_5"),
    (BER, 1.0, "BER_5"),
])
def test_interval_boundaries(spec_map, variable, value, expected):
    assert discretize(value, spec_map[variable]) == expected


@pytest.mark.parametrize("variable,value", [
    (EBN0, -72.81), (EBN0, 109.2), (DOP_PHI, -0.001), (DOP_PHI, 0.2), (BER, 1.5),
])
def test_out_of_range(spec_map, variable, value):
    with pytest.raises(DiscretizationRangeError) as info:
        discretize(value, spec_map[variable])
    assert info.value.variable == variable


def test_clamp(spec_map):
    assert discretize(200.0, spec_map[EBN0], clamp=True) == "EbN0_6"
    assert discretize(-500.0, spec_map[CI], clamp=True) == "C/I_1"


def test_nan_is_never_clamped(spec_map):
    with pytest.raises(DiscretizationRangeError):
        discretize(math.nan, spec_map[EBN0], clamp=True)


def test_categorical_cannot_discretize_numbers(spec_map):
    with pytest.raises(VariableSpecError):
        discretize(1.0, spec_map[MOD])


@given(st.floats(-72.8, 109.1), st.floats(-72.8, 109.1))
def test_state_index_is_monotone(a, b):
    spec = default_variable_specs()[0]
    lo, hi = sorted((a, b))
    assert spec.index_of(discretize(lo, spec)) <= spec.index_of(discretize(hi, spec))


def test_discretize_record(specs):
    trial = TrialRecord("D8PSK", 25.0, 35.0, 0.12, 9999, 0)
    record = discretize_record(trial, specs)
    assert dict(record) == {MOD: "D8PSK", EBN0: "EbN0_6", CI: "C/I_4", DOP_PHI: "Phi_3", BER: "BER_1"}


def test_discretize_record_needs_every_variable(specs):
    trial = TrialRecord("DBPSK", 5.0, 5.0, 0.0, 100, 1)
    with pytest.raises(VariableSpecError):
        discretize_record(trial, [s for s in specs if s.name != BER])


class TestVariableSpec:
    def test_from_boundaries(self):
        spec = VariableSpec.from_boundaries("X", "dB", "X", (0, 1, 2))
        assert spec.state_names == ("X_1", "X_2")
        assert (spec.lower, spec.upper) == (0.0, 2.0)

    def test_needs_two_states(self):
        with pytest.raises(VariableSpecError):
            VariableSpec.from_boundaries("X", "", "X", (0, 1))

    def test_states_must_be_contiguous(self):
        with pytest.raises(VariableSpecError):
            VariableSpec("X", "", VariableKind.INTERVAL,
                         states=(StateDef("a", 0, 1), StateDef("b", 1.5, 2)))

    def test_state_bounds_must_increase(self):
        with pytest.raises(VariableSpecError):
            StateDef("a", 1, 1)

    def test_unique_names(self):
        with pytest.raises(VariableSpecError):
            VariableSpec.categorical("M", ["A", "A"])

    def test_dict_round_trip(self, spec_map):
        assert VariableSpec.from_dict(spec_map[CI].to_dict()) == spec_map[CI]
