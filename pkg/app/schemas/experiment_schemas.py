# schemas/experiment_schemas.py
"""
Pydantic schemas for the experiment configuration file and the dataset rows
"""
import math
from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config.settings import settings
from app.models.link_models import BITS_PER_SYMBOL
from app.models.variable_models import StateDef, VariableKind, VariableSpec
from app.services.channel.impairment_service import DopplerModel
from app.services.discretizer.discretization_service import MOD, RECORD_VARIABLES, default_variable_specs


class SamplingMode(str, Enum):
    """Where in a state's interval the continuous grid values are placed"""
    UNIFORM = "uniform"
    MIDPOINT = "midpoint"


class StateSchema(BaseModel):
    """One interval state"""
    model_config = ConfigDict(extra="forbid")

    name: str
    lower: float
    upper: float


class VariableSpecSchema(BaseModel):
    """Schema for a variable definition (interval states or categories)"""
    model_config = ConfigDict(extra="forbid")

    name: str
    unit: str = ""
    kind: VariableKind
    states: List[StateSchema] = Field(default_factory=list)
    categories: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_spec(self):
        self.to_spec()
        return self

    def to_spec(self) -> VariableSpec:
        return VariableSpec(
            name=self.name,
            unit=self.unit,
            kind=self.kind,
            states=tuple(StateDef(s.name, s.lower, s.upper) for s in self.states),
            categories=tuple(self.categories),
        )

    @classmethod
    def from_spec(cls, spec: VariableSpec) -> "VariableSpecSchema":
        return cls.model_validate(spec.to_dict())


def _default_variables() -> List[VariableSpecSchema]:
    return [VariableSpecSchema.from_spec(spec) for spec in default_variable_specs()]


class ExperimentConfig(BaseModel):
    """Schema for the experiment JSON file; unknown keys are rejected"""
    model_config = ConfigDict(extra="forbid")

    variables: List[VariableSpecSchema] = Field(default_factory=_default_variables)
    trials_per_combo: int = Field(default_factory=lambda: settings.simulation.TRIALS_PER_COMBO, ge=1)
    bits_per_trial: int = Field(default_factory=lambda: settings.simulation.BITS_PER_TRIAL, ge=1)
    master_seed: int = Field(default_factory=lambda: settings.simulation.MASTER_SEED,
                             ge=0, lt=2 ** 64)  # one uint64 entropy word
    modulations: List[str] = Field(default_factory=lambda: list(BITS_PER_SYMBOL))
    sampling_mode: SamplingMode = SamplingMode.UNIFORM
    doppler_model: DopplerModel = DopplerModel.RAMP
    clamp_out_of_range: bool = False

    @field_validator("modulations")
    @classmethod
    def _check_modulations(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one modulation is required")
        if len(set(value)) != len(value):
            raise ValueError(f"duplicate modulations in {value}")
        unknown = [m for m in value if m not in BITS_PER_SYMBOL]
        if unknown:
            raise ValueError(f"unknown modulations {unknown}; expected {list(BITS_PER_SYMBOL)}")
        return value

    @model_validator(mode="after")
    def _check_consistency(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        missing = [n for n in RECORD_VARIABLES if n not in names]
        if missing:
            raise ValueError(f"missing variables {missing}")

        specs = self.spec_map()
        for name in RECORD_VARIABLES:
            expected = VariableKind.CATEGORICAL if name == MOD else VariableKind.INTERVAL
            if specs[name].kind is not expected:
                raise ValueError(f"{name} must be a {expected.value} variable")

        mod_spec = specs[MOD]
        absent = [m for m in self.modulations if m not in mod_spec.state_names]
        if absent:
            raise ValueError(f"modulations {absent} are not states of {MOD}")

        for m in self.modulations:
            if self.bits_per_trial < BITS_PER_SYMBOL[m]:
                raise ValueError(f"bits_per_trial {self.bits_per_trial} is shorter than one {m} symbol")
        return self

    def specs(self) -> List[VariableSpec]:
        return [v.to_spec() for v in self.variables]

    def spec_map(self):
        return {v.name: v.to_spec() for v in self.variables}

    def bits_for(self, modulation: str) -> int:
        """bits_per_trial rounded down to whole symbols of `modulation`"""
        k = BITS_PER_SYMBOL[modulation]
        return self.bits_per_trial - self.bits_per_trial % k


DATASET_COLUMNS = ["mod", "ebn0_db", "ci_db", "dop_phi_rad", "n_bits", "n_errors", "ber"]


class DatasetRow(BaseModel):
    """Schema for one line of the dataset CSV"""
    model_config = ConfigDict(extra="forbid")

    mod: str
    ebn0_db: float
    ci_db: float
    dop_phi_rad: float = Field(ge=0.0)
    n_bits: int = Field(ge=1)
    n_errors: int = Field(ge=0)
    ber: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_counts(self):
        if self.mod not in BITS_PER_SYMBOL:
            raise ValueError(f"unknown modulation {self.mod!r}")
        if self.n_errors > self.n_bits:
            raise ValueError(f"n_errors {self.n_errors} exceeds n_bits {self.n_bits}")
        if not math.isclose(self.ber, self.n_errors / self.n_bits, rel_tol=1e-12, abs_tol=1e-15):
            raise ValueError(f"ber {self.ber} != n_errors / n_bits")
        return self
