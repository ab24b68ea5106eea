"""
Capacity bounds and achievable exchange rates of the two-way relay channel.

Usage:
    from twrc_toolkit.capacity import PowerProfile, upper_bound, sic_rates

    pp = PowerProfile(15, 15, 15)
    report = upper_bound(pp)
    report.upper_bound   # 1.0 bits per channel use
    report.t1_opt        # 0.5

    sic = sic_rates(PowerProfile(1, 3, 0))
    sic.regime           # Regime.STRONG_DOMINATES

Powers are linear and noise-normalized (unit-variance Gaussian noise), so a
power is also the SNR of the link it feeds.
"""

import enum
import math
from dataclasses import dataclass

from django.core.exceptions import ValidationError


# Slack for the regime boundary ps <= pw + pw**2 in floating point
REGIME_RTOL = 1e-12


def db_to_linear(db):
    """Convert a dB value to linear scale."""
    db = float(db)
    if not math.isfinite(db):
        raise ValidationError(f"dB value must be finite, got {db}", code='invalid_power')
    try:
        return 10.0 ** (db / 10.0)
    except OverflowError:
        raise ValidationError(f"{db} dB overflows a linear float", code='invalid_power')


def linear_to_db(value):
    """Convert a positive linear value to dB."""
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValidationError(f"Linear value must be positive and finite, got {value}", code='invalid_power')
    return 10.0 * math.log10(value)


def _check_power(value, name='power'):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}", code='invalid_power')
    if not math.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be finite and >= 0, got {value}", code='invalid_power')
    return value


@dataclass(frozen=True)
class PowerProfile:
    """Transmit powers of N1, N2 and the relay N3."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        for name in ('p1', 'p2', 'p3'):
            object.__setattr__(self, name, _check_power(getattr(self, name), name))

    @classmethod
    def from_db(cls, p1_db, p2_db, p3_db):
        return cls(db_to_linear(p1_db), db_to_linear(p2_db), db_to_linear(p3_db))

    @classmethod
    def symmetric(cls, power):
        return cls(power, power, power)

    @property
    def weak(self):
        return min(self.p1, self.p2)

    @property
    def strong(self):
        return max(self.p1, self.p2)

    def to_dict(self):
        return {'p1': self.p1, 'p2': self.p2, 'p3': self.p3}


class Regime(enum.Enum):
    STRONG_DOMINATES = 'StrongDominates'
    INTERMEDIATE = 'Intermediate'


class Strategy(enum.Enum):
    CUT_SET_BOUND = 'CutSetBound'
    SIC_NETWORK_CODING = 'SicNetworkCoding'
    PNC_NETWORK_CODING = 'PncNetworkCoding'


@dataclass(frozen=True)
class BoundReport:
    upper_bound: float
    t1_opt: float
    uplink_rate: float
    downlink_rate: float
    degenerate: bool = False

    def to_dict(self):
        return {
            'upper_bound': self.upper_bound,
            't1_opt': self.t1_opt,
            'uplink_rate': self.uplink_rate,
            'downlink_rate': self.downlink_rate,
            'degenerate': self.degenerate,
        }


@dataclass(frozen=True)
class SicRateReport:
    rate_strong: float
    rate_weak: float
    min_rate: float
    regime: Regime

    def to_dict(self):
        return {
            'rate_strong': self.rate_strong,
            'rate_weak': self.rate_weak,
            'min_rate': self.min_rate,
            'regime': self.regime.value,
        }


@dataclass(frozen=True)
class ExchangeReport:
    strategy: Strategy
    uplink_rate: float
    downlink_rate: float
    rate: float
    t1: float

    def to_dict(self):
        return {
            'strategy': self.strategy.value,
            'uplink_rate': self.uplink_rate,
            'downlink_rate': self.downlink_rate,
            'rate': self.rate,
            't1': self.t1,
        }


def shannon_rate(p):
    """
    Capacity of a real AWGN link with SNR p.

    Args:
        p: Linear power, noise variance 1.

    Returns:
        float: (1/2) log2(1 + p) in bits per channel use.
    """
    p = _check_power(p, 'p')
    return 0.5 * math.log2(1.0 + p)


def combine_rates(uplink, downlink):
    """
    Exchange rate of a two-phase scheme with the best uplink time share.

    The uplink share t1 equalizes t1 * uplink = (1 - t1) * downlink.

    Returns:
        tuple: (rate, t1). Both rates zero gives (0.0, 0.5).
    """
    uplink = _check_power(uplink, 'uplink')
    downlink = _check_power(downlink, 'downlink')
    total = uplink + downlink
    if total == 0:
        return 0.0, 0.5
    return uplink * downlink / total, downlink / total


def upper_bound(pp):
    """
    Cut-set upper bound on the symmetric exchange rate.

    Returns:
        BoundReport: bound, optimal uplink share and the two phase rates.
    """
    uplink = shannon_rate(pp.weak)
    downlink = shannon_rate(pp.p3)
    rate, t1 = combine_rates(uplink, downlink)
    return BoundReport(
        upper_bound=rate,
        t1_opt=t1,
        uplink_rate=uplink,
        downlink_rate=downlink,
        degenerate=(uplink == 0 and downlink == 0),
    )


def sic_rates(pp):
    """
    Rates of separated multiple access with successive interference cancellation.

    The stronger end node is decoded first with the weaker one as noise,
    then removed before the weaker node is decoded.
    """
    pw, ps = pp.weak, pp.strong
    rate_strong = 0.5 * math.log2(1.0 + ps / (pw + 1.0))
    rate_weak = shannon_rate(pw)
    regime = Regime.STRONG_DOMINATES if ps >= pw + pw * pw else Regime.INTERMEDIATE
    return SicRateReport(
        rate_strong=rate_strong,
        rate_weak=rate_weak,
        min_rate=min(rate_strong, rate_weak),
        regime=regime,
    )


def low_snr_lower_bound(pw):
    """Lower bound (1/2) log2(1 + pw - pw^2/(pw+1)) on the SIC rate in the intermediate regime."""
    pw = _check_power(pw, 'pw')
    return 0.5 * math.log2(1.0 + pw - pw * pw / (pw + 1.0))


def low_snr_gap(pw, ps):
    """
    Shortfall of the first-decoded SIC stream below the weak link capacity.

    Only defined on the intermediate regime pw <= ps <= pw + pw^2.

    Returns:
        float: shannon_rate(pw) - (1/2) log2(1 + ps/(pw+1)), never negative.
    """
    pw = _check_power(pw, 'pw')
    ps = _check_power(ps, 'ps')
    ceiling = pw + pw * pw
    if ps < pw or ps > ceiling + REGIME_RTOL * max(1.0, ceiling):
        raise ValidationError(
            f"Need pw <= ps <= pw + pw^2, got pw={pw}, ps={ps}",
            code='regime',
        )
    gap = shannon_rate(pw) - 0.5 * math.log2(1.0 + ps / (pw + 1.0))
    return max(gap, 0.0)


def equalize_powers(pp):
    """Back the stronger end node off to the weaker one's power."""
    return PowerProfile(pp.weak, pp.weak, pp.p3)


def exchange_rate(pp, strategy):
    """
    Symmetric exchange rate of a relaying strategy.

    CUT_SET_BOUND is the upper bound. SIC_NETWORK_CODING decodes both
    messages at the relay and broadcasts their network-coded combination.
    PNC_NETWORK_CODING equalizes the end powers and assumes a
    capacity-approaching ring-linear code, so it meets the bound.
    """
    strategy = Strategy(strategy)
    downlink = shannon_rate(pp.p3)

    if strategy is Strategy.SIC_NETWORK_CODING:
        uplink = sic_rates(pp).min_rate
    elif strategy is Strategy.PNC_NETWORK_CODING:
        uplink = shannon_rate(equalize_powers(pp).p1)
    else:
        uplink = shannon_rate(pp.weak)

    rate, t1 = combine_rates(uplink, downlink)
    return ExchangeReport(
        strategy=strategy,
        uplink_rate=uplink,
        downlink_rate=downlink,
        rate=rate,
        t1=t1,
    )


def sic_efficiency(pp):
    """Fraction of the cut-set bound reached by SIC plus network coding."""
    bound = upper_bound(pp).upper_bound
    if bound == 0:
        return 1.0
    return exchange_rate(pp, Strategy.SIC_NETWORK_CODING).rate / bound
