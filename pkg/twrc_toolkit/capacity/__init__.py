"""Capacity bounds and achievable rates for the two-way relay channel."""

from .rates import (
    PowerProfile,
    BoundReport,
    SicRateReport,
    ExchangeReport,
    Regime,
    Strategy,
    db_to_linear,
    linear_to_db,
    shannon_rate,
    combine_rates,
    upper_bound,
    sic_rates,
    low_snr_gap,
    low_snr_lower_bound,
    equalize_powers,
    exchange_rate,
    sic_efficiency,
)

__all__ = [
    'PowerProfile',
    'BoundReport',
    'SicRateReport',
    'ExchangeReport',
    'Regime',
    'Strategy',
    'db_to_linear',
    'linear_to_db',
    'shannon_rate',
    'combine_rates',
    'upper_bound',
    'sic_rates',
    'low_snr_gap',
    'low_snr_lower_bound',
    'equalize_powers',
    'exchange_rate',
    'sic_efficiency',
]
