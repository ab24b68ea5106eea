"""
q-ary PAM, the superimposed constellation, midpoint detection and PNC demapping.

Usage:
    from twrc_toolkit.phy import PamScheme, SumConstellation, modulate, detect_sum, pnc_demap

    scheme = PamScheme.for_power(q=4, power=5)     # alpha = 1
    x = modulate(u, scheme)                          # alpha * (2u - (q - 1))
    sc = SumConstellation.for_scheme(scheme)
    m_hat = detect_sum(y, sc)                        # indices 0..2q-2
    u_sum = pnc_demap(m_hat, scheme.q)               # (u1 + u2) mod q
"""

import math
from dataclasses import dataclass

import numpy as np
from django.core.exceptions import ValidationError

from ..capacity.rates import db_to_linear
from ..packets import QPacket


def _symbols(u):
    if isinstance(u, QPacket):
        return u.symbols
    return np.asarray(u, dtype=np.int64)


@dataclass(frozen=True)
class PamScheme:
    """
    Uniform q-ary PAM with amplitude scale alpha.

    Points are alpha * (2u - (q - 1)) for u in Z_q; adjacent points are
    d = 2 * alpha apart and the mean symbol energy is alpha^2 (q^2 - 1) / 3.
    """

    q: int
    alpha: float

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValidationError(f"q must be an integer >= 2, got {self.q}", code='invalid_scheme')
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"alpha must be finite and > 0, got {self.alpha}", code='invalid_scheme')
        object.__setattr__(self, 'q', int(self.q))
        object.__setattr__(self, 'alpha', float(self.alpha))

    @classmethod
    def for_power(cls, q, power):
        """Scale so the mean energy of uniform symbols equals power."""
        power = float(power)
        if not (math.isfinite(power) and power > 0):
            raise ValidationError(f"power must be finite and > 0, got {power}", code='invalid_power')
        return cls(q, math.sqrt(3.0 * power / (q * q - 1)))

    @classmethod
    def from_snr_db(cls, q, snr_db):
        return cls.for_power(q, db_to_linear(snr_db))

    @property
    def power(self):
        return self.alpha ** 2 * (self.q ** 2 - 1) / 3.0

    @property
    def spacing(self):
        return 2.0 * self.alpha

    @property
    def points(self):
        return self.alpha * (2.0 * np.arange(self.q) - (self.q - 1))


@dataclass(frozen=True)
class SumConstellation:
    """
    The 2q - 1 point constellation of two synchronized equal-power PAM signals.

    Index m corresponds to u1 + u2 = m; its probability is triangular,
    (q - |m - (q - 1)|) / q^2, with 1/q^2 at both end points.
    """

    q: int
    alpha: float

    @classmethod
    def for_scheme(cls, scheme):
        return cls(scheme.q, scheme.alpha)

    @property
    def points(self):
        m = np.arange(2 * self.q - 1)
        return self.alpha * (2.0 * m - 2.0 * (self.q - 1))

    @property
    def probs(self):
        m = np.arange(2 * self.q - 1)
        return (self.q - np.abs(m - (self.q - 1))) / float(self.q * self.q)

    @property
    def thresholds(self):
        """Midpoints between adjacent points; 2q - 2 values."""
        m = np.arange(2 * self.q - 2)
        return self.alpha * (2.0 * m + 1.0 - 2.0 * (self.q - 1))


def modulate(u, scheme):
    """
    Map q-ary symbols to PAM amplitudes.

    Returns:
        np.ndarray: alpha * (2u - (q - 1)), same shape as u.
    """
    symbols = _symbols(u)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= scheme.q):
        raise ValidationError(
            f"Symbols must lie in 0..{scheme.q - 1}",
            code='symbol_out_of_range',
        )
    return scheme.alpha * (2.0 * symbols - (scheme.q - 1))


def _nearest_index(y, thresholds):
    # Number of thresholds strictly below y; a tie sits on the lower index
    return np.searchsorted(thresholds, np.asarray(y, dtype=float), side='left')


def detect(y, scheme):
    """Single-user midpoint detection back to Z_q (ties to the lower symbol)."""
    thresholds = scheme.alpha * (2.0 * np.arange(scheme.q - 1) + 1.0 - (scheme.q - 1))
    return _nearest_index(y, thresholds)


def detect_sum(y, sc):
    """
    Nearest-point detection on the superimposed constellation.

    Returns:
        np.ndarray: Indices m in 0..2q-2, ties broken toward the lower index.
    """
    return _nearest_index(y, sc.thresholds)


def pnc_demap(m_hat, q):
    """
    Collapse a superimposed-constellation index to the modulo-q sum.

    With u1 + u2 = m, this is (u1 + u2) mod q.
    """
    m_hat = np.asarray(m_hat, dtype=np.int64)
    if m_hat.size and (m_hat.min() < 0 or m_hat.max() > 2 * q - 2):
        raise ValidationError(
            f"Sum index must lie in 0..{2 * q - 2}",
            code='index_out_of_range',
        )
    return m_hat % q
