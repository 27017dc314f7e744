# models/variable_models.py
"""
Discrete variable models: named states with interval or categorical definitions
"""
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, Tuple

from app.services.errors import VariableSpecError


class VariableKind(str, Enum):
    """How the states of a variable are defined"""
    INTERVAL = "interval"
    CATEGORICAL = "categorical"


@dataclass(frozen=True)
class StateDef:
    """One interval state: [lower, upper), closed above when it is the last state"""
    name: str
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise VariableSpecError(
                f"State {self.name}: lower {self.lower} must be below upper {self.upper}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class VariableSpec:
    """
    A discrete variable of the network

    Interval variables carry contiguous, increasing StateDefs; categorical ones carry names only.
    """
    name: str
    unit: str
    kind: VariableKind
    states: Tuple[StateDef, ...] = ()
    categories: Tuple[str, ...] = ()

    def __post_init__(self):
        names = self.state_names
        if len(names) < 2:
            raise VariableSpecError(f"{self.name}: at least 2 states required, got {len(names)}")
        if len(set(names)) != len(names):
            raise VariableSpecError(f"{self.name}: state names must be unique")

        if self.kind is VariableKind.INTERVAL:
            if self.categories:
                raise VariableSpecError(f"{self.name}: interval variable cannot list categories")
            for prev, nxt in zip(self.states, self.states[1:]):
                if prev.upper != nxt.lower:
                    raise VariableSpecError(
                        f"{self.name}: states {prev.name} and {nxt.name} are not contiguous "
                        f"({prev.upper} != {nxt.lower})"
                    )
        elif self.states:
            raise VariableSpecError(f"{self.name}: categorical variable cannot list intervals")

    @property
    def state_names(self) -> Tuple[str, ...]:
        if self.kind is VariableKind.INTERVAL:
            return tuple(s.name for s in self.states)
        return tuple(self.categories)

    @property
    def cardinality(self) -> int:
        return len(self.state_names)

    @property
    def lower(self) -> float:
        return self.states[0].lower

    @property
    def upper(self) -> float:
        return self.states[-1].upper

    def index_of(self, state: str) -> int:
        try:
            return self.state_names.index(state)
        except ValueError:
            raise VariableSpecError(f"{self.name}: unknown state {state!r}") from None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "unit": self.unit, "kind": self.kind.value}
        if self.kind is VariableKind.INTERVAL:
            data["states"] = [s.to_dict() for s in self.states]
        else:
            data["categories"] = list(self.categories)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VariableSpec":
        kind = VariableKind(data["kind"])
        return cls(
            name=data["name"],
            unit=data.get("unit", ""),
            kind=kind,
            states=tuple(StateDef(**s) for s in data.get("states", [])),
            categories=tuple(data.get("categories", [])),
        )

    @classmethod
    def categorical(cls, name: str, categories, unit: str = "") -> "VariableSpec":
        return cls(name=name, unit=unit, kind=VariableKind.CATEGORICAL, categories=tuple(categories))

    @classmethod
    def from_boundaries(cls, name: str, unit: str, prefix: str, boundaries) -> "VariableSpec":
        """Build an interval variable named prefix_1..prefix_n from n+1 boundaries"""
        bounds = [float(b) for b in boundaries]
        states = tuple(
            StateDef(f"{prefix}_{i}", lo, hi)
            for i, (lo, hi) in enumerate(zip(bounds, bounds[1:]), start=1)
        )
        return cls(name=name, unit=unit, kind=VariableKind.INTERVAL, states=states)


@dataclass(frozen=True)
class DiscreteRecord(Mapping):
    """A fully discretized training sample: variable name -> state name"""
    states: Dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: str) -> str:
        return self.states[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.states.items())))
