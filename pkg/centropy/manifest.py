"""
Run manifests: the record written next to every output, sufficient to reproduce it.
"""
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .exceptions import MalformedInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunManifest:
    """``input_path`` is set for discovery runs, ``generator`` for synthetic data."""
    input_path: str
    config: object
    outputs: dict
    version: str
    duration_seconds: float
    timestamp: object
    generator: dict = field(default=None)


def manifest_path(output):
    output = Path(output)
    return output.with_name(f"{output.stem}.manifest.json")


def render_manifest(manifest):
    from rest_framework.renderers import JSONRenderer

    from . import conf
    conf.setup()
    from .serializers import RunManifestSerializer

    return JSONRenderer().render(RunManifestSerializer(manifest).data, renderer_context={'indent': 2})


def write_manifest(manifest, path):
    Path(path).write_bytes(render_manifest(manifest))
    logger.info(f"Wrote run manifest to {path}")


def read_manifest(path):
    from rest_framework.exceptions import ParseError
    from rest_framework.parsers import JSONParser

    from . import conf
    conf.setup()
    from .serializers import RunManifestSerializer

    try:
        payload = JSONParser().parse(io.BytesIO(Path(path).read_bytes()))
    except OSError as e:
        raise MalformedInput(f"Cannot read manifest {path}: {str(e)}")
    except ParseError as e:
        raise MalformedInput(f"Manifest {path} is not valid JSON: {e.detail}")

    serializer = RunManifestSerializer(data=payload)
    if not serializer.is_valid():
        raise MalformedInput(f"Manifest {path} is invalid: {serializer.errors}")
    return serializer.save()
