# app/services/discretizer/discretization_service.py - Continuous measurements -> named states
"""
Intervals are half-open [lower, upper); the last state of a variable is also closed above.
"""
import bisect
import math
from typing import Dict, Iterable, List, Mapping, Sequence, Union

from app.models.link_models import BITS_PER_SYMBOL, TrialRecord
from app.models.variable_models import DiscreteRecord, VariableKind, VariableSpec
from app.services.errors import DiscretizationRangeError, VariableSpecError

EBN0 = "EbN0"
CI = "C/I"
DOP_PHI = "Dop_Phi"
MOD = "MOD"
BER = "BER"

RECORD_VARIABLES = (MOD, EBN0, CI, DOP_PHI, BER)

SpecsLike = Union[Sequence[VariableSpec], Mapping[str, VariableSpec]]


def default_variable_specs() -> List[VariableSpec]:
    """The published state definitions for EbN0, C/I, Dop_Phi, BER and MOD"""
    return [
        VariableSpec.from_boundaries(EBN0, "dB", "EbN0", (-72.8, 0, 10, 13, 16, 19, 109.1)),
        VariableSpec.from_boundaries(CI, "dB", "C/I", (-159, 0, 20, 30, 40, 50, 159)),
        VariableSpec.from_boundaries(DOP_PHI, "rad", "Phi", (0, 0.05, 0.1, 0.136)),
        VariableSpec.from_boundaries(BER, "", "BER", (0, 1e-5, 1e-3, 1e-2, 1e-1, 1)),
        VariableSpec.categorical(MOD, tuple(BITS_PER_SYMBOL)),
    ]


def specs_by_name(specs: SpecsLike) -> Dict[str, VariableSpec]:
    if isinstance(specs, Mapping):
        return dict(specs)
    by_name = {spec.name: spec for spec in specs}
    if len(by_name) != len(specs):
        raise VariableSpecError("variable names must be unique")
    return by_name


def discretize(value: float, spec: VariableSpec, clamp: bool = False) -> str:
    """Name of the state whose interval contains value"""
    if spec.kind is not VariableKind.INTERVAL:
        raise VariableSpecError(f"{spec.name} is categorical and cannot discretize numbers")
    if not math.isfinite(value):
        raise DiscretizationRangeError(spec.name, value, spec.lower, spec.upper)

    if value < spec.lower or value > spec.upper:
        if not clamp:
            raise DiscretizationRangeError(spec.name, value, spec.lower, spec.upper)
        value = min(max(value, spec.lower), spec.upper)

    if value == spec.upper:
        return spec.states[-1].name
    lowers = [state.lower for state in spec.states]
    return spec.states[bisect.bisect_right(lowers, value) - 1].name


def discretize_record(trial: TrialRecord, specs: SpecsLike, clamp: bool = False) -> DiscreteRecord:
    """Map one trial onto the five network variables"""
    by_name = specs_by_name(specs)
    missing = [name for name in RECORD_VARIABLES if name not in by_name]
    if missing:
        raise VariableSpecError(f"missing variable specs: {missing}")

    mod_spec = by_name[MOD]
    if trial.modulation not in mod_spec.state_names:
        raise VariableSpecError(f"{MOD}: unknown state {trial.modulation!r}")

    return DiscreteRecord({
        MOD: trial.modulation,
        EBN0: discretize(trial.ebn0_db, by_name[EBN0], clamp),
        CI: discretize(trial.ci_db, by_name[CI], clamp),
        DOP_PHI: discretize(trial.dop_phi_rad, by_name[DOP_PHI], clamp),
        BER: discretize(trial.ber, by_name[BER], clamp),
    })


def discretize_dataset(trials: Iterable[TrialRecord], specs: SpecsLike,
                       clamp: bool = False) -> List[DiscreteRecord]:
    by_name = specs_by_name(specs)
    return [discretize_record(trial, by_name, clamp) for trial in trials]
