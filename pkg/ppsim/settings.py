"""
Django settings for the ppsim project.

Only the pieces a command-line simulation toolkit needs are configured: the
pseudo_pure app (management commands and tests), logging, and the PPSIM_*
knobs read by pseudo_pure.conf. There is no database, URL routing or
template layer.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

from pathlib import Path
import environ

env = environ.Env(
    DEBUG=(bool, False),
    LOG_LEVEL=(str, 'WARNING'),
    PPSIM_NEWTON_TOL=(float, 1e-10),
    PPSIM_MAX_ITER=(int, 60),
    PPSIM_POPULATION_TOL=(float, 1e-6),
    PPSIM_HERMITIAN_TOL=(float, 1e-10),
    PPSIM_SOLVER_WORKERS=(int, 1),
    PPSIM_MAX_RANDOM_STARTS=(int, 256),
)

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

environ.Env.read_env(str(BASE_DIR / '.env'))

DEBUG = env('DEBUG')

# Application definition

INSTALLED_APPS = [
    'pseudo_pure',
]

# Nothing is persisted; tests run on SimpleTestCase.
DATABASES = {}

# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'pseudo_pure': {
            'handlers': ['stderr'],
            'level': env('LOG_LEVEL'),
            'propagate': False,
        },
    },
}

# Simulation defaults, see pseudo_pure/conf.py

PPSIM_SEED = env.int('PPSIM_SEED', default=None)
PPSIM_NEWTON_TOL = env('PPSIM_NEWTON_TOL')
PPSIM_MAX_ITER = env('PPSIM_MAX_ITER')
PPSIM_POPULATION_TOL = env('PPSIM_POPULATION_TOL')
PPSIM_HERMITIAN_TOL = env('PPSIM_HERMITIAN_TOL')
PPSIM_SOLVER_WORKERS = env('PPSIM_SOLVER_WORKERS')
PPSIM_MAX_RANDOM_STARTS = env('PPSIM_MAX_RANDOM_STARTS')
