from pathlib import Path
from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

# No sessions or signing are used; the key only satisfies Django's startup checks
SECRET_KEY = config('SECRET_KEY', default='bellowlab-local-only')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'rest_framework',
    'actuators',
]

# Everything is file based: CSV in, CSV/SVG/markdown out
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# bellowlab paths
BELLOWLAB_DATA_DIR = BASE_DIR / 'actuators' / 'data'
BELLOWLAB_OUT = config('BELLOWLAB_OUT', default='bellowlab-out')
BELLOWLAB_PNEUMATICS = config(
    'BELLOWLAB_PNEUMATICS',
    default=str(BELLOWLAB_DATA_DIR / 'pneumatics.ini'),
)

LOG_LEVEL = config('BELLOWLAB_LOG_LEVEL', default='INFO')

# Logging goes to stderr; stdout and output files carry data only
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
        'bellowlab': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
        },
        'actuators': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
        },
    },
}
