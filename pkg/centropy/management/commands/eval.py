"""
python manage.py eval predicted.json truth.json [--ignore-lags]
"""
from rest_framework.renderers import JSONRenderer

from centropy.graph import evaluate, read_graph
from centropy.management.base import CentropyCommand
from centropy.serializers import EvalReportSerializer


class Command(CentropyCommand):
    help = "Compare a discovered graph against a ground-truth graph"

    def add_arguments(self, parser):
        parser.add_argument('predicted', help="Graph JSON produced by discover")
        parser.add_argument('truth', help="Ground-truth graph JSON")
        parser.add_argument('--ignore-lags', action='store_true', help="Compare (source, sink) pairs only")

    def handle(self, *args, **options):
        with self.reporting_errors():
            predicted = read_graph(options['predicted'])
            truth = read_graph(options['truth'])
            report = evaluate(predicted, truth, ignore_lags=options['ignore_lags'])
        self.stdout.write(JSONRenderer().render(EvalReportSerializer(report).data).decode('utf-8'))
