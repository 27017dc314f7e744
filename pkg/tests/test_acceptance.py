"""
Full-size sweep (200 trials of 10^4 bits) over the grid rows the checks below look at.

Minutes of CPU; deselect with `pytest -m "not slow"`.
"""
import pytest

from app.schemas import ExperimentConfig
from app.services.bayes_net import default_structure, learn_cpt
from app.services.discretizer import BER, CI, EBN0, discretize_dataset
from app.services.experiment import doppler_sensitivity, iter_grid, run_scenarios

pytestmark = pytest.mark.slow

MODULATIONS = ("DBPSK", "DQPSK", "D8PSK")
PHI_STATES = ("Phi_1", "Phi_2", "Phi_3")
CI_STATES = tuple(f"C/I_{i}" for i in range(1, 7))


def _checked(states):
    return states[EBN0] == "EbN0_1" or states[CI] == "C/I_1" or states[EBN0] == "EbN0_6"


@pytest.fixture(scope="module")
def learned():
    config = ExperimentConfig(trials_per_combo=200, bits_per_trial=10_000)
    scenarios = [p.scenario for p in iter_grid(config) if _checked(p.states)]
    records = run_scenarios(scenarios, workers=-1, doppler_model=config.doppler_model)
    return learn_cpt(discretize_dataset(records, config.specs()), default_structure(), BER)


def test_rows_are_multiples_of_one_over_t(learned):
    for row in learned.rows.values():
        if row.observed:
            assert row.n == 200
            for p in row.probs:
                assert abs(p * 200 - round(p * 200)) < 1e-9


@pytest.mark.parametrize("mod", MODULATIONS)
def test_lowest_ebn0_always_gives_worst_ber(learned, mod):
    for ci in CI_STATES:
        for phi in PHI_STATES:
            assert learned.probability("BER_5", (mod, "EbN0_1", ci, phi)) >= 0.99


@pytest.mark.parametrize("mod", MODULATIONS)
def test_lowest_ci_always_gives_worst_ber(learned, mod):
    for ebn0 in (f"EbN0_{i}" for i in range(1, 7)):
        for phi in PHI_STATES:
            assert learned.probability("BER_5", (mod, ebn0, "C/I_1", phi)) >= 0.99


def test_dbpsk_is_clean_at_high_ebn0_and_ci(learned):
    for ci in CI_STATES[2:]:
        for phi in PHI_STATES:
            assert learned.probability("BER_1", ("DBPSK", "EbN0_6", ci, phi)) >= 0.95


@pytest.mark.parametrize("phi", PHI_STATES)
def test_more_bits_per_symbol_more_errors(learned, phi):
    p = [learned.probability("BER_1", (mod, "EbN0_6", "C/I_2", phi)) for mod in MODULATIONS]
    assert p[0] >= p[1] >= p[2]


@pytest.mark.xfail(strict=False, reason=(
    "Doppler ramp of at most 0.136 rad plus interference at C/I >= 20 dB stays inside the "
    "D8PSK decision margin of pi/8, so Phi_1 and Phi_3 rows look alike; see DESIGN.md"
))
def test_doppler_lowers_d8psk_first_state(learned):
    (check,) = doppler_sensitivity(learned, ["D8PSK"])
    assert check.difference >= 0.2
