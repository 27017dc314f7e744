# app/config/settings.py
"""
Settings configuration for the BER Bayesian-network pipeline
Each concern has its own settings group, composed into one global `settings` object
"""
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from the project .env file (if present)
load_dotenv()

APP_DIR = Path(__file__).resolve().parent.parent
PROJECT_ROOT = APP_DIR.parent


class LoggingSettings(BaseSettings):
    """Logging settings"""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    LOG_LEVEL: str = Field(default="INFO")
    LOG_FORMAT: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    LOG_DIR: Optional[Path] = Field(default=None, description="Adds a file handler when set")


class SimulationSettings(BaseSettings):
    """Defaults for the Monte Carlo sweep"""

    model_config = SettingsConfigDict(env_prefix="SIM_", env_file=".env", extra="ignore")

    # 200 trials per parent combination: the reference probabilities are multiples of 1/200
    TRIALS_PER_COMBO: int = Field(default=200, ge=1)
    BITS_PER_TRIAL: int = Field(default=10_000, ge=1)
    MASTER_SEED: int = Field(default=20150601, ge=0, lt=2 ** 64)
    WORKERS: int = Field(default=1, description="joblib n_jobs; -1 uses every core")


class ValidationSettings(BaseSettings):
    """Pass/fail thresholds for CPT comparison"""

    model_config = SettingsConfigDict(env_prefix="VALIDATE_", env_file=".env", extra="ignore")

    DEGENERATE_THRESHOLD: float = Field(default=0.05, ge=0.0, le=1.0)
    INTERIOR_THRESHOLD: float = Field(default=0.35, ge=0.0, le=1.0)


class ReportSettings(BaseSettings):
    """Settings for the BER-vs-EbN0 sweep curves"""

    model_config = SettingsConfigDict(env_prefix="REPORT_", env_file=".env", extra="ignore")

    SWEEP_EBN0_MIN_DB: float = 0.0
    SWEEP_EBN0_MAX_DB: float = 20.0
    SWEEP_EBN0_STEP_DB: float = 1.0
    SWEEP_BITS: int = Field(default=100_000, ge=1)


class Settings:
    """Main settings class - one attribute per settings group"""

    DATA_DIR = PROJECT_ROOT / "worker" / "data"
    REFERENCE_TABLES_PATH = APP_DIR / "data" / "reference_tables.json"

    logging = LoggingSettings()
    simulation = SimulationSettings()
    validation = ValidationSettings()
    report = ReportSettings()


# Create global settings instance
settings = Settings()

# Debug info
if __name__ == "__main__":
    print("🔧 Settings Debug:")
    print(f"DATA_DIR: {settings.DATA_DIR}")
    print(f"REFERENCE_TABLES_PATH: {settings.REFERENCE_TABLES_PATH}")
    print(f"Logging: {settings.logging.model_dump()}")
    print(f"Simulation: {settings.simulation.model_dump()}")
    print(f"Validation: {settings.validation.model_dump()}")
    print(f"Report: {settings.report.model_dump()}")
