# app/services/experiment/file_service.py - Dataset CSV and experiment config files
import json
import logging
import re
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd
from pydantic import ValidationError

from app.models.link_models import TrialRecord
from app.schemas.experiment_schemas import DATASET_COLUMNS, DatasetRow, ExperimentConfig
from app.services.errors import ConfigError, DatasetParseError

FLOAT_COLUMNS = ("ebn0_db", "ci_db", "dop_phi_rad", "ber")


class FileService:
    """Handles the experiment's file artifacts: config JSON in, dataset CSV out and back in"""

    def __init__(self):
        self.logger = logging.getLogger(f"{__name__}.FileService")

    def load_config(self, path: Union[str, Path]) -> ExperimentConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a JSON object")
        try:
            config = ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid config {path}: {e}") from e
        self.logger.info(f"📋 Loaded config {path}")
        return config

    def write_dataset(self, records: Sequence[TrialRecord], path: Union[str, Path]) -> Path:
        """
        One line per record under the fixed header

        Floats are written with repr() (shortest round-trip form), so reading back is lossless.
        """
        path = Path(path)
        frame = pd.DataFrame([r.to_dict() for r in records], columns=DATASET_COLUMNS)
        for column in FLOAT_COLUMNS:
            frame[column] = frame[column].map(lambda v: repr(float(v)))
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
        self.logger.info(f"💾 Saved {len(records)} records to {path}")
        return path

    def read_dataset(self, path: Union[str, Path]) -> List[TrialRecord]:
        """Parse a dataset CSV; any malformed line raises DatasetParseError with its line number"""
        path = Path(path)
        if not path.is_file():
            raise DatasetParseError(f"dataset file not found: {path}")
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False)
        except pd.errors.EmptyDataError:
            raise DatasetParseError("empty file, expected a header", line=1) from None
        except pd.errors.ParserError as e:
            match = re.search(r"line (\d+)", str(e))
            raise DatasetParseError(str(e), line=int(match.group(1)) if match else None) from e
        except (OSError, UnicodeDecodeError) as e:
            raise DatasetParseError(f"cannot read {path}: {e}") from e

        if list(frame.columns) != DATASET_COLUMNS:
            raise DatasetParseError(
                f"header {list(frame.columns)} != {DATASET_COLUMNS}", line=1
            )

        records = []
        for offset, row in enumerate(frame.itertuples(index=False, name=None)):
            line = offset + 2
            values = dict(zip(DATASET_COLUMNS, row))
            missing = [k for k, v in values.items() if not isinstance(v, str) or v == ""]
            if missing:
                raise DatasetParseError(f"missing values for {missing}", line=line)
            try:
                parsed = DatasetRow.model_validate(values)
            except ValidationError as e:
                raise DatasetParseError(f"invalid record: {e}", line=line) from e
            records.append(TrialRecord.from_dict(parsed.model_dump()))

        self.logger.info(f"📂 Loaded {len(records)} records from {path}")
        return records
