# app/services/errors.py
"""
Exception types raised by the pipeline services
The orchestrator maps them onto CLI exit codes
"""
from typing import Optional


class PipelineError(ValueError):
    """Base class for input/validation errors raised by the services"""


class ModemInputError(PipelineError):
    """Bit or symbol sequence that the modem cannot process"""


class VariableSpecError(PipelineError):
    """Malformed variable specification"""


class DiscretizationRangeError(PipelineError):
    """Continuous value outside the total range of a variable"""

    def __init__(self, variable: str, value: float, lower: float, upper: float):
        self.variable = variable
        self.value = value
        super().__init__(f"{variable} value {value!r} outside range [{lower}, {upper}]")


class StructureError(PipelineError):
    """Invalid network structure (cycle or undeclared node)"""


class LearningError(PipelineError):
    """Training record that does not match the variable specs"""


class PriorError(PipelineError):
    """Root prior with wrong length or sum"""


class EvidenceError(PipelineError):
    """Evidence naming an unknown variable or state"""


class ImpossibleEvidenceError(PipelineError):
    """Evidence with zero probability under the model"""


class CptFormatError(PipelineError):
    """Malformed CPT document"""


class CptKeyMismatchError(PipelineError):
    """Learned and reference CPTs do not share the same rows or state spaces"""


class ConfigError(PipelineError):
    """Invalid or unreadable experiment configuration"""


class DatasetParseError(PipelineError):
    """Malformed dataset file; line numbers are 1-based and count the header"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
