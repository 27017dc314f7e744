# app/services/experiment/grid_service.py - Scenario grid over the parent state combinations
"""
Combination index c runs over (MOD, EbN0, C/I, Dop_Phi) states in row-major order of the full
MOD state list, so restricting `modulations` does not change the scenarios of the remaining
modulations. Each (c, t) gets its own SeedSequence child of the master seed:

    SeedSequence(master_seed, spawn_key=(c, t)).spawn(2) -> (value sampling, trial seed)
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List

import numpy as np

from app.models.link_models import LinkScenario
from app.models.variable_models import StateDef
from app.schemas.experiment_schemas import ExperimentConfig, SamplingMode
from app.services.discretizer.discretization_service import CI, DOP_PHI, EBN0, MOD

logger = logging.getLogger(__name__)

GRID_PARENTS = (MOD, EBN0, CI, DOP_PHI)


@dataclass(frozen=True)
class GridPoint:
    """A scenario together with the state combination it was drawn from"""
    combo_index: int
    trial_index: int
    states: Dict[str, str]
    scenario: LinkScenario


def sample_in_state(state: StateDef, rng: np.random.Generator, mode: SamplingMode) -> float:
    """A value inside [lower, upper)"""
    if SamplingMode(mode) is SamplingMode.MIDPOINT:
        return (state.lower + state.upper) / 2.0
    value = float(rng.uniform(state.lower, state.upper))
    # uniform() may round up onto the open upper bound
    if value >= state.upper:
        value = float(np.nextafter(state.upper, state.lower))
    return value


def seeds_for(master_seed: int, combo_index: int, trial_index: int):
    """(generator for the continuous values, 64-bit trial seed)"""
    values_seq, trial_seq = np.random.SeedSequence(
        master_seed, spawn_key=(combo_index, trial_index)
    ).spawn(2)
    values_rng = np.random.Generator(np.random.PCG64(values_seq))
    trial_seed = int(trial_seq.generate_state(1, dtype=np.uint64)[0])
    return values_rng, trial_seed


def iter_grid(config: ExperimentConfig) -> Iterator[GridPoint]:
    """Grid points in canonical order: combination index, then trial index"""
    specs = config.spec_map()
    state_lists = [specs[name].state_names for name in GRID_PARENTS]
    state_defs = {
        name: {s.name: s for s in specs[name].states} for name in (EBN0, CI, DOP_PHI)
    }

    for combo_index, combo in enumerate(itertools.product(*state_lists)):
        states = dict(zip(GRID_PARENTS, combo))
        modulation = states[MOD]
        if modulation not in config.modulations:
            continue
        n_bits = config.bits_for(modulation)
        for t in range(config.trials_per_combo):
            rng, seed = seeds_for(config.master_seed, combo_index, t)
            scenario = LinkScenario(
                modulation=modulation,
                ebn0_db=sample_in_state(state_defs[EBN0][states[EBN0]], rng, config.sampling_mode),
                ci_db=sample_in_state(state_defs[CI][states[CI]], rng, config.sampling_mode),
                dop_phi_rad=sample_in_state(state_defs[DOP_PHI][states[DOP_PHI]], rng,
                                            config.sampling_mode),
                n_bits=n_bits,
                seed=seed,
            )
            yield GridPoint(combo_index, t, states, scenario)


def build_grid(config: ExperimentConfig) -> List[LinkScenario]:
    scenarios = [point.scenario for point in iter_grid(config)]
    logger.info(f"📊 Built {len(scenarios)} scenarios "
                f"({config.trials_per_combo} trials per combination, {len(config.modulations)} modulations)")
    return scenarios
