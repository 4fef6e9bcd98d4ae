"""Typed access to the PPSIM_* settings.

Falls back to the library defaults below when Django settings are not
configured, so the numerical modules can be imported and used without a
settings module.
"""
from django.conf import settings

DEFAULTS = {
    "PPSIM_SEED": None,
    "PPSIM_NEWTON_TOL": 1e-10,
    "PPSIM_MAX_ITER": 60,
    "PPSIM_POPULATION_TOL": 1e-6,
    "PPSIM_HERMITIAN_TOL": 1e-10,
    "PPSIM_SOLVER_WORKERS": 1,
    "PPSIM_MAX_RANDOM_STARTS": 256,
}


def get_setting(name: str):
    default = DEFAULTS[name]
    if not settings.configured:
        return default
    return getattr(settings, name, default)
