"""
harness - Monte Carlo sweeps, reports and the twrc command line.

The sweep engine and report writers are importable as a library; the same
experiments are exposed as the management commands twrc_bounds, twrc_rates,
twrc_ser, twrc_chain and twrc_netfn, and as the `twrc` console script.
"""

from .sweep import (
    Mode,
    ExperimentConfig,
    ExperimentResult,
    SweepRow,
    RateRow,
    run_sweep,
    run_experiment,
)
from .reports import format_table, write_csv, read_csv, write_json, read_json
from ..conf import resolve_workers

__all__ = [
    'Mode',
    'ExperimentConfig',
    'ExperimentResult',
    'SweepRow',
    'RateRow',
    'run_sweep',
    'run_experiment',
    'format_table',
    'write_csv',
    'read_csv',
    'write_json',
    'read_json',
    'resolve_workers',
]
