"""
python manage.py plot g.json --out g.dot [--min-cmi 0.1]

Layout and rendering are left to Graphviz; the command prints the render call.
"""
from pathlib import Path

from centropy.graph import GraphFormat, filter_edges, read_graph, serialize
from centropy.management.base import CentropyCommand


class Command(CentropyCommand):
    help = "Write a graph JSON file as Graphviz DOT"

    def add_arguments(self, parser):
        parser.add_argument('graph', help="Graph JSON file")
        parser.add_argument('--out', help="DOT output path (default: the graph path with a .dot suffix)")
        parser.add_argument('--min-cmi', type=float, help="Drop edges whose CMI is below this value")

    def handle(self, *args, **options):
        out = Path(options['out'] or Path(options['graph']).with_suffix('.dot'))
        with self.reporting_errors():
            graph = read_graph(options['graph'])
            if options['min_cmi'] is not None:
                graph = filter_edges(graph, options['min_cmi'])
            out.write_bytes(serialize(graph, GraphFormat.DOT))
        self.stdout.write(f"Render with: dot -Tpng {out} -o {out.with_suffix('.png')}")
