"""
Shared plumbing for the twrc_* management commands.

Subclasses implement add_experiment_arguments(), build_config() and render().
Domain errors become CommandError with return code 2; argument errors keep
Django's default return code 1.
"""

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from twrc_toolkit.harness.reports import format_table, write_csv, write_json
from twrc_toolkit.harness.sweep import run_experiment


logger = logging.getLogger(__name__)

DOMAIN_ERROR = 2


def add_sweep_arguments(parser, default_trials=100000):
    parser.add_argument(
        '--q',
        type=int,
        default=2,
        help='Alphabet size (default: 2).',
    )
    parser.add_argument(
        '--snr-db',
        type=float,
        nargs='+',
        default=[0.0, 5.0, 10.0],
        help='SNR grid in dB (default: 0 5 10).',
    )
    parser.add_argument(
        '--trials',
        type=int,
        default=default_trials,
        help=f'Trials per grid point (default: {default_trials}).',
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=0,
        help='Seed of the random streams (default: 0).',
    )


def render_sweep(result):
    rows = [
        (row.snr_db, row.analytic, row.empirical, row.stderr, row.trials)
        for row in result.rows
    ]
    return format_table(['snr_db', 'analytic', 'empirical', 'stderr', 'trials'], rows)


class TwrcCommand(BaseCommand):

    def add_arguments(self, parser):
        self.add_experiment_arguments(parser)
        parser.add_argument(
            '--csv',
            metavar='PATH',
            help='Also write the result rows as CSV.',
        )
        parser.add_argument(
            '--json',
            metavar='PATH',
            help='Also write the full result, config included, as JSON.',
        )

    def add_experiment_arguments(self, parser):
        pass

    def build_config(self, options):
        raise NotImplementedError

    def render(self, result):
        raise NotImplementedError

    def handle(self, *args, **options):
        logger.debug(
            f"Running {self.__module__.rsplit('.', 1)[-1]}",
            extra={key: value for key, value in options.items() if key not in ('stdout', 'stderr')},
        )
        try:
            result = run_experiment(self.build_config(options))
            self.stdout.write(self.render(result))
            if options['csv']:
                write_csv(result.records, options['csv'])
            if options['json']:
                write_json(result, options['json'])
        except ValidationError as e:
            raise CommandError('; '.join(e.messages), returncode=DOMAIN_ERROR)
        except OSError as e:
            raise CommandError(f"Cannot write report: {e}", returncode=DOMAIN_ERROR)

        for path in (options['csv'], options['json']):
            if path:
                self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
