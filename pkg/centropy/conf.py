"""Lazy Django bootstrap for library use outside ``manage.py``."""
import os

import django
from django.apps import apps
from django.conf import settings


def setup():
    """Configure Django with the project settings unless already done."""
    if apps.ready or apps.loading:
        return
    if not settings.configured:
        os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    django.setup()
