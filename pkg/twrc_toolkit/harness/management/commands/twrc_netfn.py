"""
twrc_netfn - Check a relay function for recoverability and independence.

Usage:
    python manage.py twrc_netfn --q 2 --builtin xor
    python manage.py twrc_netfn --q 3 --builtin int-sum
    python manage.py twrc_netfn --table my_table.txt --json report.json
"""

from twrc_toolkit.harness.reports import format_table
from twrc_toolkit.harness.sweep import ExperimentConfig, Mode
from twrc_toolkit.netfn import BUILTINS
from ._base import TwrcCommand


class Command(TwrcCommand):
    help = 'Evaluate the entropy conditions a relay function must meet.'

    def add_experiment_arguments(self, parser):
        parser.add_argument(
            '--q',
            type=int,
            default=2,
            help='Alphabet size for builtins (default: 2).',
        )
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument(
            '--builtin',
            choices=BUILTINS,
            help='One of the builtin relay functions.',
        )
        source.add_argument(
            '--table',
            metavar='PATH',
            help="Table file: a 'q m' line followed by q rows of q symbols.",
        )

    def build_config(self, options):
        return ExperimentConfig(
            mode=Mode.NETFN_CHECK,
            q=options['q'],
            netfn=options['builtin'],
            table_path=options['table'],
        )

    def render(self, result):
        report = result.netfn_report
        rows = [
            ('H(W2|W1,W3)', report.h_w2_given_w1w3),
            ('H(W1|W2,W3)', report.h_w1_given_w2w3),
            ('I(W3;W1)', report.i_w3_w1),
            ('I(W3;W2)', report.i_w3_w2),
        ]
        lines = [
            format_table(['quantity', 'bits'], rows),
            '',
            f'recoverable: {str(report.satisfies_recoverability).lower()}',
            f'independent: {str(report.satisfies_independence).lower()}',
            f'valid: {str(report.valid).lower()}',
        ]
        return '\n'.join(lines)
