"""
twrc_ser - Monte Carlo symbol error rates against their closed forms.

Usage:
    python manage.py twrc_ser --mode p2p --q 4 --snr-db 0 5 10
    python manage.py twrc_ser --mode sum --q 2 --snr-db 0 --trials 1000000 --seed 7
    python manage.py twrc_ser --mode pnc --q 8 --csv pnc.csv
"""

from twrc_toolkit.harness.sweep import ExperimentConfig, Mode
from ._base import TwrcCommand, add_sweep_arguments, render_sweep


MODES = {
    'p2p': Mode.SER_P2P,
    'sum': Mode.SER_SUM,
    'pnc': Mode.SER_PNC,
}


class Command(TwrcCommand):
    help = 'Estimate point-to-point, superimposed or PNC symbol error rates.'

    def add_experiment_arguments(self, parser):
        parser.add_argument(
            '--mode',
            choices=sorted(MODES),
            default='p2p',
            help='Which error rate to estimate (default: p2p).',
        )
        add_sweep_arguments(parser)

    def build_config(self, options):
        return ExperimentConfig(
            mode=MODES[options['mode']],
            q=options['q'],
            snr_db_grid=options['snr_db'],
            trials=options['trials'],
            seed=options['seed'],
        )

    def render(self, result):
        return render_sweep(result)
