from django.apps import AppConfig


class FrechetConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'frechet'
    verbose_name = 'Bernoulli Frechet classes'
