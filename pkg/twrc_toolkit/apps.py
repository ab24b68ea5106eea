from django.apps import AppConfig


class TwrcToolkitConfig(AppConfig):
    name = 'twrc_toolkit'
    verbose_name = 'TWRC Toolkit'
