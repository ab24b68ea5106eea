"""
Ring-linear block codes over Z_q with exact nearest-codeword decoding.

Usage:
    from twrc_toolkit.coding import make_code, encode, decode_nearest

    code = make_code('single_parity_check', q=4, k=2)
    encode(code, QPacket([2, 3], 4))          # QPacket([2, 3, 3], q=4)
    decode_nearest(code, QPacket([2, 3, 3], 4))

    code = parse_code_spec('rep:5', q=2)       # repetition, length 5

Encoding is the matrix action of the generator over Z_q, so the encoder
commutes with symbol-wise modulo-q addition. Decoding enumerates the whole
codebook, which is only feasible for small q^k.
"""

import itertools
import logging
from functools import cached_property

import numpy as np
from django.core.exceptions import ValidationError

from ..conf import get_setting
from ..packets import QPacket


logger = logging.getLogger(__name__)

REPETITION = 'repetition'
SINGLE_PARITY_CHECK = 'single_parity_check'

SPEC_ALIASES = {
    'rep': REPETITION,
    'repetition': REPETITION,
    'spc': SINGLE_PARITY_CHECK,
    'single_parity_check': SINGLE_PARITY_CHECK,
}


class CodebookTooLarge(ValidationError):
    """Raised when a codebook is too large to enumerate."""

    def __init__(self, message):
        super().__init__(message, code='codebook_too_large')


class RingLinearCode:
    """
    A length-l, dimension-k linear code over Z_q given by its generator.

    The generator must contain a k x k identity sub-block, which makes the
    encoder injective.
    """

    def __init__(self, q, generator, name='custom'):
        q = int(q)
        if q < 2:
            raise ValidationError(f"q must be >= 2, got {q}", code='invalid_code')
        generator = np.array(generator, dtype=np.int64)
        if generator.ndim != 2 or generator.shape[0] < 1 or generator.shape[1] < generator.shape[0]:
            raise ValidationError(
                f"Generator must be k x l with 1 <= k <= l, got shape {generator.shape}",
                code='invalid_code',
            )
        if generator.min() < 0 or generator.max() >= q:
            raise ValidationError(f"Generator entries must lie in 0..{q - 1}", code='invalid_code')

        k = generator.shape[0]
        identity = np.eye(k, dtype=np.int64)
        for i in range(k):
            if not np.any(np.all(generator == identity[:, [i]], axis=0)):
                raise ValidationError(
                    "Generator must contain a k x k identity sub-block",
                    code='invalid_code',
                )
        generator.setflags(write=False)

        self.q = q
        self.generator = generator
        self.k = k
        self.l = generator.shape[1]
        self.name = name

    def __repr__(self):
        return f"RingLinearCode(name={self.name!r}, q={self.q}, k={self.k}, l={self.l})"

    def __eq__(self, other):
        if isinstance(other, RingLinearCode):
            return self.q == other.q and np.array_equal(self.generator, other.generator)
        return False

    def __hash__(self):
        return hash((self.q, self.generator.tobytes()))

    @property
    def rate(self):
        return self.k / self.l

    @property
    def codebook_size(self):
        return self.q ** self.k

    def encode_array(self, messages):
        """Encode an (..., k) integer array to (..., l)."""
        messages = np.asarray(messages, dtype=np.int64)
        return (messages @ self.generator) % self.q

    @cached_property
    def messages(self):
        """All q^k messages in lexicographic order."""
        limit = get_setting('TWRC_MAX_CODEBOOK')
        if self.codebook_size > limit:
            raise CodebookTooLarge(
                f"Codebook of {self.q}^{self.k} words exceeds the enumeration bound {limit}"
            )
        return np.array(list(itertools.product(range(self.q), repeat=self.k)), dtype=np.int64)

    @cached_property
    def codebook(self):
        """Codewords of self.messages, row for row."""
        return self.encode_array(self.messages)


def make_code(kind, q, k=None, l=None):
    """
    Build a small ring-linear code.

    Args:
        kind: 'repetition' (k = 1, length l) or 'single_parity_check'
            (k message symbols plus a parity symbol making the sum 0 mod q).
        q: Modulus.
        k: Message length.
        l: Codeword length.
    """
    q = int(q)
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}", code='invalid_code')

    if kind == REPETITION:
        if l is None or int(l) < 1:
            raise ValidationError("Repetition codes need a length l >= 1", code='invalid_code')
        if k not in (None, 1):
            raise ValidationError(f"Repetition codes have k = 1, got {k}", code='invalid_code')
        return RingLinearCode(q, np.ones((1, int(l)), dtype=np.int64), name=f'rep{int(l)}')

    if kind == SINGLE_PARITY_CHECK:
        if k is None or int(k) < 1:
            raise ValidationError("Single-parity-check codes need k >= 1", code='invalid_code')
        k = int(k)
        if l is not None and int(l) != k + 1:
            raise ValidationError(f"Single-parity-check codes have l = k + 1, got l = {l}", code='invalid_code')
        parity = np.full((k, 1), q - 1, dtype=np.int64)
        return RingLinearCode(q, np.hstack([np.eye(k, dtype=np.int64), parity]), name=f'spc{k}')

    raise ValidationError(f"Unknown code kind {kind!r}", code='invalid_code')


def parse_code_spec(spec, q):
    """
    Parse 'rep:L' or 'spc:K' into a code over Z_q.
    """
    kind, _, size = str(spec).partition(':')
    kind = SPEC_ALIASES.get(kind.strip().lower())
    try:
        size = int(size)
    except ValueError:
        kind = None
    if kind is None:
        raise ValidationError(
            f"Code spec must look like 'rep:5' or 'spc:2', got {spec!r}",
            code='invalid_code',
        )
    if kind == REPETITION:
        return make_code(REPETITION, q, l=size)
    return make_code(SINGLE_PARITY_CHECK, q, k=size)


def _check_message(code, w):
    if w.q != code.q:
        raise ValidationError(f"Packet is over Z_{w.q}, code is over Z_{code.q}", code='modulus_mismatch')
    if len(w) != code.k:
        raise ValidationError(f"Message length {len(w)} != k = {code.k}", code='length_mismatch')


def encode(code, w):
    """Encode a message packet of length k into a codeword packet of length l."""
    _check_message(code, w)
    return QPacket(code.encode_array(w.symbols), code.q)


def decode_nearest(code, r):
    """
    Minimum-Hamming-distance decoding by codebook enumeration.

    Ties go to the lexicographically smallest message.

    Args:
        code: The code.
        r: A received QPacket of length l, or an (n, l) array of words.

    Returns:
        QPacket for a packet input, else an (n, k) array of messages.
    """
    if isinstance(r, QPacket):
        if r.q != code.q:
            raise ValidationError(f"Packet is over Z_{r.q}, code is over Z_{code.q}", code='modulus_mismatch')
        if len(r) != code.l:
            raise ValidationError(f"Word length {len(r)} != l = {code.l}", code='length_mismatch')
        return QPacket(decode_nearest(code, r.symbols[None, :])[0], code.q)

    words = np.asarray(r, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] != code.l:
        raise ValidationError(f"Expected an (n, {code.l}) array, got shape {words.shape}", code='length_mismatch')

    codebook = code.codebook
    chunk = max(1, get_setting('TWRC_DECODE_CHUNK') // (codebook.shape[0] * code.l))
    best = np.empty(words.shape[0], dtype=np.int64)
    for start in range(0, words.shape[0], chunk):
        block = words[start:start + chunk]
        distances = (block[:, None, :] != codebook[None, :, :]).sum(axis=2)
        # argmin returns the first minimum, i.e. the smallest message
        best[start:start + chunk] = distances.argmin(axis=1)
    return code.messages[best]
