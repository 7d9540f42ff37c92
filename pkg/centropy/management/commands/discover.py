"""
python manage.py discover --input data.csv --out g.json

Runs network discovery on a CSV time series and writes the graph as JSON,
the edge table as CSV (``g.csv``), an optional DOT file and the run manifest
(``g.manifest.json``). ``--manifest`` replays a previous run.
"""
import logging
import time
from pathlib import Path

from django.conf import settings
from django.utils import timezone

from centropy import __version__
from centropy.discovery import FORWARD_TESTS, discover_network
from centropy.estimators import EstimatorKind
from centropy.graph import GraphFormat, serialize
from centropy.management.base import CentropyCommand
from centropy.manifest import RunManifest, manifest_path, read_manifest, write_manifest
from centropy.serializers import DiscoveryConfigSerializer
from centropy.timeseries import read_csv

logger = logging.getLogger(__name__)


class Command(CentropyCommand):
    help = "Discover the lagged causal network of a multivariate time series"

    def add_arguments(self, parser):
        parser.add_argument('--input', help="CSV file: header row of variable names, one row per time step")
        parser.add_argument('--out', help="Graph JSON output path; the edge CSV and manifest are written next to it")
        parser.add_argument('--manifest', help="Replay the run recorded in this manifest")
        parser.add_argument('--dot', help="Also write the graph in DOT format to this path")
        parser.add_argument(
            '--estimator',
            choices=[kind.value for kind in EstimatorKind],
            default=getattr(settings, 'CENTROPY_ESTIMATOR', 'gaussian'),
        )
        parser.add_argument('--k', type=int, default=getattr(settings, 'CENTROPY_K_NEIGHBORS', 4), help="kNN neighbours")
        parser.add_argument('--alpha', type=float, help="Sets both significance levels")
        parser.add_argument('--alpha-forward', type=float)
        parser.add_argument('--alpha-backward', type=float)
        parser.add_argument('--permutations', type=int, default=getattr(settings, 'CENTROPY_PERMUTATIONS', 200))
        parser.add_argument('--max-lag', type=int, default=getattr(settings, 'CENTROPY_MAX_LAG', 1))
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--threads', type=int, help="Worker threads (default: CENTROPY_THREADS)")
        parser.add_argument(
            '--permutation-threads', type=int,
            help="Threads per shuffle test (default: CENTROPY_PERMUTATION_THREADS)",
        )
        parser.add_argument('--no-standardize', action='store_true')
        parser.add_argument('--no-self', action='store_true', help="Exclude a target's own past from its candidates")
        parser.add_argument('--backward-fixpoint', action='store_true', help="Repeat backward sweeps until nothing is removed")
        parser.add_argument('--forward-test', choices=FORWARD_TESTS, default='candidate')

    def config_from_options(self, options):
        alpha = options['alpha'] if options['alpha'] is not None else getattr(settings, 'CENTROPY_ALPHA', 0.05)
        data = {
            'estimator': options['estimator'],
            'k_neighbors': options['k'],
            'alpha_forward': options['alpha_forward'] if options['alpha_forward'] is not None else alpha,
            'alpha_backward': options['alpha_backward'] if options['alpha_backward'] is not None else alpha,
            'permutations': options['permutations'],
            'max_lag': options['max_lag'],
            'seed': options['seed'],
            'standardize': not options['no_standardize'],
            'include_self': not options['no_self'],
            'backward_fixpoint': options['backward_fixpoint'],
            'forward_test': options['forward_test'],
        }
        return self.validated(DiscoveryConfigSerializer(data=data))

    def handle(self, *args, **options):
        if options['manifest']:
            with self.reporting_errors():
                replay = read_manifest(options['manifest'])
            if replay.config is None or replay.input_path is None:
                raise self.invalid(f"Manifest {options['manifest']} does not record a discovery run")
            config, input_path = replay.config, replay.input_path
            out = options['out'] or replay.outputs.get('graph')
            dot = options['dot'] or replay.outputs.get('dot')
        else:
            if not options['input'] or not options['out']:
                raise self.invalid("--input and --out are required unless --manifest is given")
            config = self.config_from_options(options)
            input_path, out, dot = options['input'], options['out'], options['dot']

        threads = options['threads'] or getattr(settings, 'CENTROPY_THREADS', 1)
        if threads < 1:
            raise self.invalid(f"--threads must be at least 1, got {threads}")
        permutation_threads = options['permutation_threads'] or getattr(settings, 'CENTROPY_PERMUTATION_THREADS', 1)
        if permutation_threads < 1:
            raise self.invalid(f"--permutation-threads must be at least 1, got {permutation_threads}")

        out = Path(out)
        outputs = {'graph': str(out), 'table': str(out.with_suffix('.csv'))}
        if dot:
            outputs['dot'] = str(dot)

        started = time.perf_counter()
        with self.reporting_errors():
            series = read_csv(input_path)
            graph = discover_network(
                series.values, config, node_names=series.names, n_jobs=threads,
                permutation_jobs=permutation_threads,
            )

            out.write_bytes(serialize(graph, GraphFormat.JSON))
            Path(outputs['table']).write_bytes(serialize(graph, GraphFormat.CSV))
            if dot:
                Path(dot).write_bytes(serialize(graph, GraphFormat.DOT))

            write_manifest(
                RunManifest(
                    input_path=str(input_path),
                    config=config,
                    outputs=outputs,
                    version=__version__,
                    duration_seconds=time.perf_counter() - started,
                    timestamp=timezone.now(),
                ),
                manifest_path(out),
            )
        logger.info(f"Discovered {len(graph.edges)} edges; graph written to {out}")
