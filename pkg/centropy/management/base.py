"""
Shared plumbing for the command-line verbs: verbosity, error translation, exit codes.
"""
import logging
from contextlib import contextmanager

from django.core.management.base import BaseCommand, CommandError

from ..exceptions import (
    CentropyError,
    DiscoveryError,
    EstimatorError,
    GraphError,
    InvalidConfig,
    MalformedInput,
    NodeCountMismatch,
    SeriesTooShort,
)

EXIT_MALFORMED_INPUT = 2
EXIT_INVALID_CONFIG = 3
EXIT_ESTIMATOR_FAILURE = 4

VERBOSITY_LEVELS = {2: logging.INFO, 3: logging.DEBUG}

EXIT_CODES = (
    ((InvalidConfig, SeriesTooShort, NodeCountMismatch), EXIT_INVALID_CONFIG),
    ((MalformedInput, GraphError), EXIT_MALFORMED_INPUT),
    ((EstimatorError, DiscoveryError), EXIT_ESTIMATOR_FAILURE),
)


def exit_code(error):
    for classes, code in EXIT_CODES:
        if isinstance(error, classes):
            return code
    return EXIT_INVALID_CONFIG


class CentropyCommand(BaseCommand):
    requires_system_checks = []

    def execute(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options.get('verbosity', 1))
        if level is not None:
            logging.getLogger('centropy').setLevel(level)
        return super().execute(*args, **options)

    @contextmanager
    def reporting_errors(self):
        """Turn library errors into a CommandError carrying the documented exit code."""
        try:
            yield
        except CentropyError as e:
            raise CommandError(f"{type(e).__name__}: {str(e)}", returncode=exit_code(e)) from e

    def invalid(self, message):
        return CommandError(message, returncode=EXIT_INVALID_CONFIG)

    def validated(self, serializer):
        """Saved object of ``serializer``; validation failures exit as invalid configuration."""
        if not serializer.is_valid():
            errors = "; ".join(f"{field}: {' '.join(map(str, messages))}" for field, messages in serializer.errors.items())
            raise self.invalid(f"Invalid parameters: {errors}")
        with self.reporting_errors():
            return serializer.save()
