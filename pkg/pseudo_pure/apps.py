from django.apps import AppConfig


class PseudoPureConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'pseudo_pure'
    verbose_name = 'Pseudo-pure state preparation by line-selective pulses'
