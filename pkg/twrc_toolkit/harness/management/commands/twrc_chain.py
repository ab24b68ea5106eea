"""
twrc_chain - Packet error rate of the coded PNC uplink.

Usage:
    python manage.py twrc_chain --code rep:5 --q 2 --snr-db 0 5 10
    python manage.py twrc_chain --code spc:2 --q 4 --trials 20000 --json chain.json
"""

from twrc_toolkit.harness.sweep import ExperimentConfig, Mode
from ._base import TwrcCommand, add_sweep_arguments, render_sweep


class Command(TwrcCommand):
    help = 'Simulate encode, superimpose, PNC demap and decode; compare with uncoded PNC SER.'

    def add_experiment_arguments(self, parser):
        parser.add_argument(
            '--code',
            required=True,
            help="Code shared by both ends: 'rep:L' or 'spc:K'.",
        )
        add_sweep_arguments(parser, default_trials=20000)

    def build_config(self, options):
        return ExperimentConfig(
            mode=Mode.CHAIN,
            q=options['q'],
            snr_db_grid=options['snr_db'],
            trials=options['trials'],
            seed=options['seed'],
            code_spec=options['code'],
        )

    def render(self, result):
        return render_sweep(result)
