"""
The coded PNC uplink: both ends encode with the same code, transmit at equal
power, and the relay recovers w1 +q w2 without decoding either message.
"""

import logging
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from ..packets import QPacket
from ..phy import NoiseModel, SumConstellation, detect_sum, modulate, pnc_demap, superimpose_and_noise
from .codes import _check_message, decode_nearest


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainResult:
    symbol_errors: int
    packet_error: bool
    decoded: QPacket
    truth: QPacket

    def to_dict(self):
        return {
            'symbol_errors': self.symbol_errors,
            'packet_error': self.packet_error,
            'decoded': self.decoded.tolist(),
            'truth': self.truth.tolist(),
        }


def _check_scheme(code, scheme):
    if code.q != scheme.q:
        raise ValidationError(
            f"Code is over Z_{code.q} but the PAM scheme is {scheme.q}-ary",
            code='modulus_mismatch',
        )


def pnc_chain_batch(code, scheme, w1, w2, rng, nm=None):
    """
    Run n independent coded PNC trials at once.

    Args:
        code: RingLinearCode shared by both ends.
        scheme: PamScheme shared by both ends.
        w1, w2: (n, k) integer message arrays.
        rng: numpy Generator supplying the channel noise.
        nm: NoiseModel, unit variance by default.

    Returns:
        tuple: (symbol errors per trial, packet error per trial, decoded messages).
    """
    _check_scheme(code, scheme)
    w1 = np.asarray(w1, dtype=np.int64)
    w2 = np.asarray(w2, dtype=np.int64)
    if w1.shape != w2.shape or w1.ndim != 2 or w1.shape[1] != code.k:
        raise ValidationError(
            f"Expected two (n, {code.k}) message arrays, got {w1.shape} and {w2.shape}",
            code='length_mismatch',
        )
    nm = NoiseModel() if nm is None else nm

    y = superimpose_and_noise(
        modulate(code.encode_array(w1), scheme),
        modulate(code.encode_array(w2), scheme),
        nm,
        rng,
    )
    u_sum = pnc_demap(detect_sum(y, SumConstellation.for_scheme(scheme)), code.q)
    decoded = decode_nearest(code, u_sum)

    symbol_errors = (decoded != (w1 + w2) % code.q).sum(axis=1)
    return symbol_errors, symbol_errors > 0, decoded


def pnc_chain_trial(code, scheme, w1, w2, nm):
    """
    One pass of encode, modulate, superimpose, detect, demap and decode.

    Noise is drawn from nm's own seeded generator.
    """
    _check_message(code, w1)
    _check_message(code, w2)
    truth = w1 + w2

    symbol_errors, packet_errors, decoded = pnc_chain_batch(
        code, scheme, w1.symbols[None, :], w2.symbols[None, :], nm.generator(), nm=nm,
    )
    decoded = QPacket(decoded[0], code.q)
    if packet_errors[0]:
        logger.debug(
            f"Chain trial decoded {decoded.tolist()} instead of {truth.tolist()}",
            extra={'code': code.name, 'q': code.q, 'symbol_errors': int(symbol_errors[0])},
        )
    return ChainResult(
        symbol_errors=int(symbol_errors[0]),
        packet_error=bool(packet_errors[0]),
        decoded=decoded,
        truth=truth,
    )
