from django.apps import AppConfig


class HarnessConfig(AppConfig):
    name = 'twrc_toolkit.harness'
    label = 'twrc_harness'
    verbose_name = 'TWRC Toolkit Harness'
