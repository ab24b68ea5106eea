"""Test settings for the TWRC toolkit."""

DEBUG = True
SECRET_KEY = 'test-secret-key-for-testing-only'

DATABASES = {}

INSTALLED_APPS = [
    'twrc_toolkit',
    'twrc_toolkit.harness',
]

USE_TZ = True
TIME_ZONE = 'UTC'

# Small shards so the sharding path is exercised by the test sweeps
TWRC_SHARD_SIZE = 50000
TWRC_ENTROPY_TOL = 1e-9
TWRC_MAX_CODEBOOK = 2 ** 20

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
        },
    },
    'loggers': {
        'twrc_toolkit': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
