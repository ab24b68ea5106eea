"""
twrc_rates - Bound versus SIC + network coding rate over an SNR grid.

Usage:
    python manage.py twrc_rates --snr-db -20 -10 0 10 20
    python manage.py twrc_rates --snr-db -30 -20 --csv rates.csv
"""

from twrc_toolkit.harness.reports import format_table
from twrc_toolkit.harness.sweep import ExperimentConfig, Mode
from ._base import TwrcCommand


class Command(TwrcCommand):
    help = 'Tabulate the upper bound, SIC rate and SIC efficiency with equal node powers.'

    def add_experiment_arguments(self, parser):
        parser.add_argument(
            '--snr-db',
            type=float,
            nargs='+',
            default=[-20.0, -10.0, 0.0, 10.0, 20.0],
            help='SNR grid in dB, applied to all three nodes (default: -20 -10 0 10 20).',
        )

    def build_config(self, options):
        return ExperimentConfig(mode=Mode.RATES, snr_db_grid=options['snr_db'])

    def render(self, result):
        return format_table(
            ['snr_db', 'upper_bound', 'sic_rate', 'efficiency', 'regime'],
            [
                (r.snr_db, r.upper_bound, r.sic_rate, r.efficiency, r.regime)
                for r in result.rows
            ],
        )
