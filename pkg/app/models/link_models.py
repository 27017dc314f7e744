# models/link_models.py
"""
Link-level simulation models: one simulated link configuration and its measured BER
"""
import math
from dataclasses import dataclass
from typing import Any, Dict

from app.services.errors import ModemInputError

BITS_PER_SYMBOL = {"DBPSK": 1, "DQPSK": 2, "D8PSK": 3}


@dataclass(frozen=True)
class LinkScenario:
    """
    One link configuration for a BER trial

    ci_db = +inf disables interference, ebn0_db = +inf disables noise
    """
    modulation: str
    ebn0_db: float
    ci_db: float
    dop_phi_rad: float
    n_bits: int
    seed: int

    def __post_init__(self):
        if self.modulation not in BITS_PER_SYMBOL:
            raise ModemInputError(f"Unknown modulation: {self.modulation}")
        k = BITS_PER_SYMBOL[self.modulation]
        if self.n_bits < k or self.n_bits % k:
            raise ModemInputError(
                f"n_bits={self.n_bits} must be a positive multiple of {k} for {self.modulation}"
            )
        if math.isnan(self.dop_phi_rad) or self.dop_phi_rad < 0:
            raise ModemInputError(f"dop_phi_rad must be >= 0, got {self.dop_phi_rad}")
        if not 0 <= self.seed < 2**64:
            raise ModemInputError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    @property
    def bits_per_symbol(self) -> int:
        return BITS_PER_SYMBOL[self.modulation]


@dataclass(frozen=True)
class TrialRecord:
    """Measured outcome of one trial; `ber` is always n_errors / n_bits"""
    modulation: str
    ebn0_db: float
    ci_db: float
    dop_phi_rad: float
    n_bits: int
    n_errors: int

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError(f"n_bits must be positive, got {self.n_bits}")
        if not 0 <= self.n_errors <= self.n_bits:
            raise ValueError(f"n_errors={self.n_errors} outside [0, {self.n_bits}]")

    @property
    def ber(self) -> float:
        return self.n_errors / self.n_bits

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary using the dataset column names"""
        return {
            "mod": self.modulation,
            "ebn0_db": self.ebn0_db,
            "ci_db": self.ci_db,
            "dop_phi_rad": self.dop_phi_rad,
            "n_bits": self.n_bits,
            "n_errors": self.n_errors,
            "ber": self.ber,
        }

    @classmethod
    def from_dict(cls, row: Dict[str, Any]) -> "TrialRecord":
        """Create from a dataset row; the ber column is derived, not stored"""
        return cls(
            modulation=row["mod"],
            ebn0_db=float(row["ebn0_db"]),
            ci_db=float(row["ci_db"]),
            dop_phi_rad=float(row["dop_phi_rad"]),
            n_bits=int(row["n_bits"]),
            n_errors=int(row["n_errors"]),
        )
