"""
twrc_bounds - Cut-set bound and strategy rates for one power profile.

Usage:
    python manage.py twrc_bounds --p1-db 11.76 --p2-db 11.76 --p3-db 11.76
    python manage.py twrc_bounds --p1-db 10 --p2-db 3 --p3-db 6 --json bounds.json
    twrc bounds --p1 15 --p2 15 --p3 15 --linear
"""

from django.core.management.base import CommandError

from twrc_toolkit.capacity import PowerProfile
from twrc_toolkit.harness.reports import format_table
from twrc_toolkit.harness.sweep import ExperimentConfig, Mode
from ._base import TwrcCommand


class Command(TwrcCommand):
    help = 'Compute the cut-set upper bound and the exchange rate of each strategy.'

    def add_experiment_arguments(self, parser):
        for node in ('p1', 'p2', 'p3'):
            parser.add_argument(
                f'--{node}-db',
                f'--{node}',
                dest=node,
                type=float,
                help=f'Transmit power of N{node[1]}, in dB unless --linear is given.',
            )
        parser.add_argument(
            '--linear',
            action='store_true',
            help='Read powers as linear values instead of dB.',
        )

    def build_config(self, options):
        powers = [options[node] for node in ('p1', 'p2', 'p3')]
        if None in powers:
            raise CommandError('Error: --p1-db, --p2-db and --p3-db are required')
        profile = PowerProfile(*powers) if options['linear'] else PowerProfile.from_db(*powers)
        return ExperimentConfig(mode=Mode.BOUNDS, powers=profile)

    def render(self, result):
        bound = result.bound
        powers = result.config.powers
        lines = [
            f'Powers (linear): p1={powers.p1:.6g} p2={powers.p2:.6g} p3={powers.p3:.6g}',
            f'upper_bound {bound.upper_bound:.6f} t1 {bound.t1_opt:.6f}',
            '',
            format_table(
                ['strategy', 'uplink', 'downlink', 'rate', 't1'],
                [
                    (r.strategy.value, r.uplink_rate, r.downlink_rate, r.rate, r.t1)
                    for r in result.exchanges
                ],
            ),
        ]
        return '\n'.join(lines)
