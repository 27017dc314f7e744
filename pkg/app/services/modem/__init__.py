# app/services/modem/__init__.py
from .dpsk_service import (
    SCHEMES,
    ModScheme,
    count_bit_errors,
    decide_increments,
    demodulate,
    get_scheme,
    gray_code,
    modulate,
)

__all__ = [
    'SCHEMES',
    'ModScheme',
    'count_bit_errors',
    'decide_increments',
    'demodulate',
    'get_scheme',
    'gray_code',
    'modulate',
]
