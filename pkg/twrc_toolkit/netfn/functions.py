"""
NetFn - relay functions W3 = f(W1, W2) as explicit symbol tables.

Usage:
    from twrc_toolkit.netfn import NetFn, builtin, load_netfn

    f = builtin('modq-add', q=4)
    f.eval(w1, w2)                      # symbol-wise table lookup
    f = NetFn([[0, 1], [1, 0]])         # XOR over q = 2
    f = load_netfn('table.txt')

Table files are plain text: the first line is `q m`, followed by q rows of q
integers in 0..m-1. Blank lines and lines starting with '#' are ignored.
"""

import numpy as np
from django.core.exceptions import ValidationError

from ..packets import QPacket


BUILTINS = ('xor', 'modq-add', 'int-sum', 'const')


class NetFn:
    """
    A relay function f: Z_q x Z_q -> Z_m applied symbol-wise.

    table[a][b] is f(a, b). The output alphabet size m defaults to q and may
    differ from it (an integer sum needs 2q - 1 outputs).
    """

    def __init__(self, table, m=None, name='custom'):
        array = np.array(table, dtype=np.int64)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 2:
            raise ValidationError(
                f"Table must be q x q with q >= 2, got shape {array.shape}",
                code='invalid_table',
            )
        q = array.shape[0]
        m = q if m is None else int(m)
        if m < 1:
            raise ValidationError(f"Output alphabet size must be >= 1, got {m}", code='invalid_table')
        if array.min() < 0 or array.max() >= m:
            raise ValidationError(f"Table entries must lie in 0..{m - 1}", code='invalid_table')
        array.setflags(write=False)

        self.table = array
        self.q = q
        self.m = m
        self.name = name

    def __repr__(self):
        return f"NetFn(name={self.name!r}, q={self.q}, m={self.m})"

    def __eq__(self, other):
        if isinstance(other, NetFn):
            return self.m == other.m and np.array_equal(self.table, other.table)
        return False

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    def __call__(self, a, b):
        return int(self.table[a, b])

    def eval(self, w1, w2):
        """
        Apply f symbol-wise to two packets.

        Returns:
            QPacket: W3 over the output alphabet (modulus max(m, 2)).
        """
        w1.check_compatible(w2)
        if w1.q != self.q:
            raise ValidationError(
                f"Packets are over Z_{w1.q}, table is over Z_{self.q}",
                code='modulus_mismatch',
            )
        return QPacket(self.table[w1.symbols, w2.symbols], max(self.m, 2))

    def relabel(self, perm_w1=None, perm_w2=None):
        """
        Permute the input alphabets.

        The new table is g(a, b) = f(perm_w1[a], perm_w2[b]).
        """
        identity = np.arange(self.q)
        perm_w1 = identity if perm_w1 is None else np.asarray(perm_w1, dtype=np.int64)
        perm_w2 = identity if perm_w2 is None else np.asarray(perm_w2, dtype=np.int64)
        for perm in (perm_w1, perm_w2):
            if sorted(perm.tolist()) != identity.tolist():
                raise ValidationError("Relabeling must be a permutation of 0..q-1", code='invalid_table')
        return NetFn(self.table[np.ix_(perm_w1, perm_w2)], m=self.m, name=f'{self.name}-relabeled')

    def to_text(self):
        """Serialize in the plain-text table format."""
        lines = [f'{self.q} {self.m}']
        lines.extend(' '.join(str(v) for v in row) for row in self.table.tolist())
        return '\n'.join(lines) + '\n'

    @classmethod
    def parse(cls, text, name='custom'):
        """Parse the plain-text table format."""
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            try:
                rows.append([int(token) for token in line.split()])
            except ValueError:
                raise ValidationError(f"Non-integer token in line: {line!r}", code='invalid_table')

        if not rows or len(rows[0]) != 2:
            raise ValidationError("First line must be 'q m'", code='invalid_table')
        q, m = rows[0]
        body = rows[1:]
        if len(body) != q or any(len(row) != q for row in body):
            raise ValidationError(f"Expected {q} rows of {q} integers", code='invalid_table')
        return cls(body, m=m, name=name)


def load_netfn(path):
    """Load a NetFn from a plain-text table file."""
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise ValidationError(f"Cannot read table file {path}: {e}", code='invalid_table')
    return NetFn.parse(text, name=str(path))


def builtin(name, q):
    """
    Build one of the named relay functions.

    Args:
        name: 'xor' (q a power of two), 'modq-add', 'int-sum' or 'const'.
        q: Input alphabet size.
    """
    q = int(q)
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}", code='invalid_table')
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing='ij')

    if name == 'xor':
        if q & (q - 1):
            raise ValidationError(f"xor needs q to be a power of two, got {q}", code='invalid_table')
        return NetFn(a ^ b, m=q, name='xor')
    if name == 'modq-add':
        return NetFn((a + b) % q, m=q, name='modq-add')
    if name == 'int-sum':
        return NetFn(a + b, m=2 * q - 1, name='int-sum')
    if name == 'const':
        return NetFn(np.zeros((q, q), dtype=np.int64), m=1, name='const')

    raise ValidationError(
        f"Unknown builtin {name!r}, expected one of {', '.join(BUILTINS)}",
        code='invalid_table',
    )


def random_netfn(q, rng, m=None):
    """Table with independent uniform entries, for property tests."""
    m = q if m is None else m
    return NetFn(rng.integers(0, m, size=(q, q)), m=m, name='random')


def recover_partner(f, w3, own, own_is_w1=True):
    """
    Recover the partner's message at an end node.

    The end node knows its own message and the broadcast W3 and picks the
    unique partner symbol consistent with both.

    Args:
        f: The relay function.
        w3: Broadcast packet.
        own: The end node's own packet.
        own_is_w1: True at N1 (own message is W1), False at N2.

    Returns:
        QPacket: The partner's packet.
    """
    if len(w3) != len(own):
        raise ValidationError(
            f"Length mismatch: {len(w3)} vs {len(own)}",
            code='length_mismatch',
        )
    if own.q != f.q:
        raise ValidationError(
            f"Packets are over Z_{own.q}, table is over Z_{f.q}",
            code='modulus_mismatch',
        )

    # rows[k] lists f(own[k], b) for every candidate partner symbol b
    rows = f.table[own.symbols, :] if own_is_w1 else f.table[:, own.symbols].T
    matches = rows == w3.symbols[:, None]
    counts = matches.sum(axis=1)
    if np.any(counts != 1):
        position = int(np.flatnonzero(counts != 1)[0])
        raise ValidationError(
            f"{f.name} is not invertible given the own symbol at position {position}",
            code='not_recoverable',
        )
    return QPacket(matches.argmax(axis=1), f.q)


def broadcast_exchange(f, w1, w2):
    """
    Network-coding broadcast: the relay sends W3 = f(W1, W2) to both ends.

    Returns:
        tuple: (W2 as recovered at N1, W1 as recovered at N2).
    """
    w3 = f.eval(w1, w2)
    at_n1 = recover_partner(f, w3, w1, own_is_w1=True)
    at_n2 = recover_partner(f, w3, w2, own_is_w1=False)
    return at_n1, at_n2
