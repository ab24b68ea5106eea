"""
twrc - command-line entry point.

Usage:
    twrc bounds --p1-db 11.76 --p2-db 11.76 --p3-db 11.76
    twrc rates --snr-db -20 -10 0 10 20 --csv rates.csv
    twrc ser --mode sum --q 2 --snr-db 0 --trials 1000000 --seed 7
    twrc chain --code rep:5 --q 2 --snr-db 0 5 10
    twrc netfn --q 2 --builtin xor

Each subcommand runs the matching twrc_* management command. Exit codes are
0 on success, 1 on usage errors and 2 on domain errors.

Environment:
    TWRC_MAX_WORKERS    cap on worker threads for Monte Carlo shards
    TWRC_LOG_LEVEL      log level of the twrc_toolkit logger (default WARNING)
"""

import sys

from django.core.management import call_command, load_command_class
from django.core.management.base import CommandError

from ..conf import configure


SUBCOMMANDS = {
    'bounds': 'twrc_bounds',
    'rates': 'twrc_rates',
    'ser': 'twrc_ser',
    'chain': 'twrc_chain',
    'netfn': 'twrc_netfn',
}

USAGE_ERROR = 1


def _parser(subcommand):
    command = load_command_class('twrc_toolkit.harness', SUBCOMMANDS[subcommand])
    return command.create_parser('twrc', subcommand)


def usage():
    return f"usage: twrc {{{','.join(SUBCOMMANDS)}}} [options]\n"


def cli(argv=None, stdout=None, stderr=None):
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name; sys.argv[1:] by default.

    Returns:
        int: The exit code.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    configure()

    if not argv or argv[0] in ('-h', '--help'):
        (stdout if argv else stderr).write(usage())
        return 0 if argv else USAGE_ERROR

    subcommand, args = argv[0], argv[1:]
    if subcommand not in SUBCOMMANDS:
        stderr.write(f"Unknown subcommand {subcommand!r}\n")
        stderr.write(usage())
        return USAGE_ERROR

    if '-h' in args or '--help' in args:
        stdout.write(_parser(subcommand).format_help())
        return 0

    try:
        call_command(SUBCOMMANDS[subcommand], *args, stdout=stdout, stderr=stderr)
    except CommandError as e:
        stderr.write(f"{e}\n")
        if e.returncode == USAGE_ERROR:
            stderr.write(_parser(subcommand).format_usage())
        return e.returncode
    return 0


def main():
    sys.exit(cli())
