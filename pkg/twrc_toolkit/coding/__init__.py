"""Ring-linear block codes and the coded PNC uplink chain."""

from .codes import (
    CodebookTooLarge,
    RingLinearCode,
    make_code,
    parse_code_spec,
    encode,
    decode_nearest,
)
from .chain import ChainResult, pnc_chain_trial, pnc_chain_batch

__all__ = [
    'CodebookTooLarge',
    'RingLinearCode',
    'make_code',
    'parse_code_spec',
    'encode',
    'decode_nearest',
    'ChainResult',
    'pnc_chain_trial',
    'pnc_chain_batch',
]
