# app/services/bayes_net/file_service.py - CPT document persistence
import json
import logging
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from app.models.network_models import Cpt, ReferenceCpd
from app.schemas.cpt_schemas import CptDocument
from app.services.errors import CptFormatError

logger = logging.getLogger(__name__)


class FileService:
    """Reads and writes CPT documents (JSON); floats are written with repr so they round-trip exactly"""

    def __init__(self):
        self.logger = logging.getLogger(f"{__name__}.FileService")

    def write_cpt(self, cpt: Cpt, path: Union[str, Path]) -> Path:
        path = Path(path)
        document = CptDocument.from_cpt(cpt)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document.model_dump(mode="json"), indent=2) + "\n",
                        encoding="utf-8")
        self.logger.info(f"💾 Saved CPT {cpt.child} ({len(cpt.rows)} rows) to {path}")
        return path

    def read_document(self, path: Union[str, Path]) -> CptDocument:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CptFormatError(f"cannot read CPT file {path}: {e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CptFormatError(f"{path} is not valid JSON: {e}") from e
        try:
            return CptDocument.model_validate(data)
        except ValidationError as e:
            raise CptFormatError(f"{path} is not a CPT document: {e}") from e

    def read_cpt(self, path: Union[str, Path]) -> Cpt:
        """Full CPT: every parent combination must be present"""
        document = self.read_document(path)
        cpt = document.to_cpt()
        self.logger.debug(f"Loaded CPT {cpt.child} with {len(cpt.rows)} rows from {path}")
        return cpt

    def read_reference(self, path: Union[str, Path]) -> ReferenceCpd:
        """Reference rows; a subset of the combinations and rounded probabilities are allowed"""
        return self.read_document(path).to_reference()

    def read_table(self, path: Union[str, Path]) -> Union[Cpt, ReferenceCpd]:
        """Full CPT when the document covers every combination, reference rows otherwise"""
        document = self.read_document(path)
        if document.is_complete:
            try:
                return document.to_cpt()
            except CptFormatError:
                # complete but rounded (e.g. a reference table); compare at reference tolerance
                pass
        return document.to_reference()
