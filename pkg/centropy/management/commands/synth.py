"""
python manage.py synth linear --n 5 --T 1000 --rho 0.7 --p 0.2 --seed 1 --out data.csv --truth truth.json
"""
import logging
import time
from pathlib import Path

from django.utils import timezone

from centropy import __version__
from centropy.datasets import GENERATORS
from centropy.graph import GraphFormat, serialize
from centropy.management.base import CentropyCommand
from centropy.manifest import RunManifest, manifest_path, write_manifest
from centropy.serializers import SyntheticConfigSerializer
from centropy.timeseries import write_csv

logger = logging.getLogger(__name__)


class Command(CentropyCommand):
    help = "Generate a synthetic time series and its ground-truth causal network"

    def add_arguments(self, parser):
        parser.add_argument('process', choices=sorted(GENERATORS))
        parser.add_argument('--n', type=int, default=5, help="Number of nodes")
        parser.add_argument('--T', type=int, default=1000, help="Recorded time steps")
        parser.add_argument('--rho', type=float, default=0.7, help="Coupling strength in (0, 1)")
        parser.add_argument('--p', type=float, default=0.2, help="Edge probability")
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--self-loops', action='store_true')
        parser.add_argument('--noise-std', type=float, default=1.0)
        parser.add_argument('--burn-in', type=int, default=100)
        parser.add_argument('--out', required=True, help="Time-series CSV output path")
        parser.add_argument('--truth', required=True, help="Truth-graph JSON output path")

    def handle(self, *args, **options):
        started = time.perf_counter()
        data = {
            'n': options['n'],
            'T': options['T'],
            'rho': options['rho'],
            'p': options['p'],
            'seed': options['seed'],
            'self_loops': options['self_loops'],
            'noise_std': options['noise_std'],
            'burn_in': options['burn_in'],
        }
        config = self.validated(SyntheticConfigSerializer(data=data))

        with self.reporting_errors():
            instance = GENERATORS[options['process']](config)
            write_csv(options['out'], instance.data, instance.truth.node_names)
            Path(options['truth']).write_bytes(serialize(instance.truth, GraphFormat.JSON))

            write_manifest(
                RunManifest(
                    input_path=None,
                    config=None,
                    generator={'process': options['process'], **SyntheticConfigSerializer(config).data},
                    outputs={'data': options['out'], 'truth': options['truth']},
                    version=__version__,
                    duration_seconds=time.perf_counter() - started,
                    timestamp=timezone.now(),
                ),
                manifest_path(options['out']),
            )
        logger.info(f"Wrote {config.T}x{config.n} series to {options['out']} with {len(instance.truth.edges)} true edges")
