"""
QPacket - a packet of q-ary symbols.

Usage:
    from twrc_toolkit.packets import QPacket

    w1 = QPacket([0, 1, 1], q=2)
    w2 = QPacket([1, 1, 0], q=2)
    w1 + w2          # symbol-wise modulo-q addition -> QPacket([1, 0, 1], q=2)
    w1.symbols       # read-only numpy int64 array
"""

import numpy as np
from django.core.exceptions import ValidationError


class QPacket:
    """A sequence of symbols in Z_q together with its modulus q."""

    def __init__(self, symbols, q):
        if int(q) != q or q < 2:
            raise ValidationError(f"Modulus must be an integer >= 2, got {q}", code='invalid_modulus')

        array = np.array(symbols, dtype=np.int64).reshape(-1)
        if array.size and (array.min() < 0 or array.max() >= q):
            raise ValidationError(
                f"Symbols must lie in 0..{int(q) - 1}",
                code='symbol_out_of_range',
            )
        array.setflags(write=False)

        self.symbols = array
        self.q = int(q)

    @classmethod
    def random(cls, q, length, rng):
        """Uniform random packet drawn from a numpy Generator."""
        return cls(rng.integers(0, q, size=length), q)

    def check_compatible(self, other):
        """Raise ValidationError unless other has the same length and modulus."""
        if not isinstance(other, QPacket):
            raise TypeError(f"Expected QPacket, got {type(other).__name__}")
        if other.q != self.q:
            raise ValidationError(
                f"Modulus mismatch: {self.q} vs {other.q}",
                code='modulus_mismatch',
            )
        if len(other) != len(self):
            raise ValidationError(
                f"Length mismatch: {len(self)} vs {len(other)}",
                code='length_mismatch',
            )

    def __len__(self):
        return int(self.symbols.size)

    def __iter__(self):
        return iter(self.symbols.tolist())

    def __getitem__(self, index):
        return int(self.symbols[index])

    def __add__(self, other):
        if not isinstance(other, QPacket):
            return NotImplemented
        self.check_compatible(other)
        return QPacket((self.symbols + other.symbols) % self.q, self.q)

    def __eq__(self, other):
        if isinstance(other, QPacket):
            return self.q == other.q and np.array_equal(self.symbols, other.symbols)
        return False

    def __hash__(self):
        return hash((self.q, self.symbols.tobytes()))

    def __repr__(self):
        return f"QPacket({self.symbols.tolist()!r}, q={self.q})"

    def tolist(self):
        return self.symbols.tolist()
