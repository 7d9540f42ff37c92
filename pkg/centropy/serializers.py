from rest_framework import serializers

from .datasets import SyntheticConfig
from .discovery import FORWARD_TESTS, MAX_SEED, DiscoveryConfig
from .estimators import EstimatorKind, EstimatorSpec
from .graph import CausalGraph, EdgeRecord
from .manifest import RunManifest


class EdgeRecordSerializer(serializers.Serializer):
    source = serializers.IntegerField(min_value=0)
    sink = serializers.IntegerField(min_value=0)
    lag = serializers.IntegerField(min_value=1)
    cmi = serializers.FloatField()
    p_value = serializers.FloatField(max_value=1)

    def validate_p_value(self, value):
        if value <= 0:
            raise serializers.ValidationError("Ensure this value is greater than 0.")
        return value


class CausalGraphSerializer(serializers.Serializer):
    """Graph JSON: ``{"n_nodes", "node_names", "edges": [...]}``"""
    n_nodes = serializers.IntegerField(min_value=0)
    node_names = serializers.ListField(
        child=serializers.CharField(trim_whitespace=False), required=False
    )
    edges = EdgeRecordSerializer(many=True)

    def validate(self, attrs):
        n_nodes = attrs['n_nodes']
        names = attrs.get('node_names')
        if names is not None:
            if len(names) != n_nodes:
                raise serializers.ValidationError(
                    {'node_names': [f"Expected {n_nodes} names, got {len(names)}"]}
                )
            if len(set(names)) != len(names):
                raise serializers.ValidationError({'node_names': ["Node names must be unique"]})

        # Per-edge errors keep their position so the path reads edges[i].field
        edge_errors = []
        for edge in attrs['edges']:
            errors = {}
            for field in ('source', 'sink'):
                if edge[field] >= n_nodes:
                    errors[field] = [f"Node index {edge[field]} is not below n_nodes={n_nodes}"]
            edge_errors.append(errors)
        if any(edge_errors):
            raise serializers.ValidationError({'edges': edge_errors})
        return attrs

    def create(self, validated_data):
        return CausalGraph(
            n_nodes=validated_data['n_nodes'],
            node_names=validated_data.get('node_names'),
            edges=tuple(EdgeRecord(**edge) for edge in validated_data['edges']),
        )


class EvalReportSerializer(serializers.Serializer):
    true_positives = serializers.IntegerField()
    false_positives = serializers.IntegerField()
    false_negatives = serializers.IntegerField()
    precision = serializers.FloatField()
    recall = serializers.FloatField()
    f1 = serializers.FloatField()


class DiscoveryConfigSerializer(serializers.Serializer):
    """Flat form of a DiscoveryConfig; the estimator spec fields sit alongside the rest."""
    estimator = serializers.ChoiceField(
        choices=[kind.value for kind in EstimatorKind], source='estimator.kind', required=False
    )
    k_neighbors = serializers.IntegerField(min_value=1, source='estimator.k_neighbors', required=False)
    regularization = serializers.FloatField(source='estimator.regularization', required=False)
    alpha_forward = serializers.FloatField(required=False)
    alpha_backward = serializers.FloatField(required=False)
    permutations = serializers.IntegerField(min_value=1, required=False)
    max_lag = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, required=False)
    standardize = serializers.BooleanField(required=False)
    include_self = serializers.BooleanField(required=False)
    backward_fixpoint = serializers.BooleanField(required=False)
    forward_test = serializers.ChoiceField(choices=FORWARD_TESTS, required=False)

    def create(self, validated_data):
        estimator = EstimatorSpec(**validated_data.pop('estimator', {}))
        return DiscoveryConfig(estimator=estimator, **validated_data)


class SyntheticConfigSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    T = serializers.IntegerField()
    rho = serializers.FloatField()
    p = serializers.FloatField()
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED)
    self_loops = serializers.BooleanField()
    noise_std = serializers.FloatField()
    burn_in = serializers.IntegerField()

    def create(self, validated_data):
        return SyntheticConfig(**validated_data)


class RunManifestSerializer(serializers.Serializer):
    """Everything needed to reproduce one run of ``discover`` or ``synth``."""
    input = serializers.CharField(source='input_path', allow_null=True)
    generator = serializers.JSONField(allow_null=True, required=False)
    config = DiscoveryConfigSerializer(allow_null=True)
    outputs = serializers.DictField(child=serializers.CharField())
    version = serializers.CharField()
    duration_seconds = serializers.FloatField(min_value=0)
    timestamp = serializers.DateTimeField()

    def create(self, validated_data):
        config = validated_data.pop('config')
        if config is not None:
            config = DiscoveryConfigSerializer().create(config)
        return RunManifest(config=config, **validated_data)
