"""
Django settings for the centropy project.

The project hosts a single app, ``centropy``, whose management commands are
the command-line front end (``python manage.py discover`` and friends).
There is no web surface and no database.

Values can be overridden from the environment or from a ``.env`` file at the
project root.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'centropy-insecure-default-key')

DEBUG = os.environ.get('DJANGO_DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
  "rest_framework",
  "centropy",
]

# Nothing is persisted; graphs, manifests and series live in plain files.
DATABASES = {}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

# REST Framework settings (serializers and renderers only)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}

# Logging
CENTROPY_LOG_LEVEL = os.environ.get('CENTROPY_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'centropy': {
            'handlers': ['console'],
            'level': CENTROPY_LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Discovery defaults used by the command-line verbs
CENTROPY_THREADS = int(os.environ.get('CENTROPY_THREADS', 1))  # Worker threads when --threads is absent
CENTROPY_PERMUTATION_THREADS = int(os.environ.get('CENTROPY_PERMUTATION_THREADS', 1))  # Threads per shuffle test
CENTROPY_ESTIMATOR = os.environ.get('CENTROPY_ESTIMATOR', 'gaussian')
CENTROPY_ALPHA = 0.05  # Forward and backward significance level
CENTROPY_PERMUTATIONS = 200  # Shuffle-test permutations
CENTROPY_MAX_LAG = 1
CENTROPY_K_NEIGHBORS = 4
