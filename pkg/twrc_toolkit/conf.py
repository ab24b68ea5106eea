"""
Settings access for the TWRC toolkit.

Usage:
    # settings.py
    TWRC_ENTROPY_TOL = 1e-9
    TWRC_SHARD_SIZE = 100000
    TWRC_MAX_CODEBOOK = 2 ** 20
    TWRC_MAX_WORKERS = 4

    from twrc_toolkit.conf import get_setting
    tol = get_setting('TWRC_ENTROPY_TOL')

Outside a Django project the defaults below apply, so the library can be used
without configuring settings. The CLI calls configure() to set up a minimal
settings object.
"""

import os

import django
from django.conf import settings
from django.core.exceptions import ValidationError


DEFAULTS = {
    'TWRC_ENTROPY_TOL': 1e-9,
    'TWRC_SHARD_SIZE': 100000,
    'TWRC_MAX_CODEBOOK': 2 ** 20,
    'TWRC_DECODE_CHUNK': 2 ** 22,
    'TWRC_MAX_WORKERS': None,
    'TWRC_CSV_FLOAT_FORMAT': '%.17g',
}

WORKERS_ENV_VAR = 'TWRC_MAX_WORKERS'
LOG_LEVEL_ENV_VAR = 'TWRC_LOG_LEVEL'


def get_setting(name):
    """Get a TWRC setting, falling back to the default."""
    default = DEFAULTS[name]
    if not settings.configured:
        return default
    return getattr(settings, name, default)


def resolve_workers():
    """
    Number of worker threads for sharded Monte Carlo runs.

    The TWRC_MAX_WORKERS environment variable wins over the setting of the
    same name; without either, the CPU count is used.

    Returns:
        int: A positive worker count.
    """
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        raw = get_setting('TWRC_MAX_WORKERS')
    if raw is None:
        return os.cpu_count() or 1

    try:
        workers = int(raw)
    except (TypeError, ValueError):
        workers = 0
    if workers < 1:
        raise ValidationError(
            f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}",
            code='invalid_workers',
        )
    return workers


def logging_config(level=None):
    """LOGGING dict that routes the twrc_toolkit logger to stderr."""
    level = (level or os.environ.get(LOG_LEVEL_ENV_VAR) or 'WARNING').upper()
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'plain': {
                'format': '%(levelname)s %(name)s: %(message)s',
            },
        },
        'handlers': {
            'stderr': {
                'class': 'logging.StreamHandler',
                'formatter': 'plain',
            },
        },
        'loggers': {
            'twrc_toolkit': {
                'handlers': ['stderr'],
                'level': level,
                'propagate': False,
            },
        },
    }


def configure(**overrides):
    """
    Configure minimal Django settings if nothing configured them yet.

    Args:
        **overrides: Extra settings, e.g. TWRC_SHARD_SIZE=10000.
    """
    if settings.configured:
        return
    if os.environ.get('DJANGO_SETTINGS_MODULE'):
        django.setup()
        return

    options = {
        'SECRET_KEY': 'twrc-toolkit-cli',
        'INSTALLED_APPS': [
            'twrc_toolkit',
            'twrc_toolkit.harness',
        ],
        'DATABASES': {},
        'USE_TZ': True,
        'LOGGING': logging_config(),
    }
    options.update(overrides)
    settings.configure(**options)
    django.setup()
