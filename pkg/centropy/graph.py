"""
Lagged causal multigraph: result model, flattening, export and evaluation.
"""
import enum
import io
import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import DuplicateEdgeTriple, GraphError, MalformedInput, NodeCountMismatch, SchemaError
from .timeseries import round_trip

logger = logging.getLogger(__name__)

TABLE_HEADER = ("Source", "Sink", "Lag", "CMI", "P-value")
PEN_SCALE = 5.0
MIN_PENWIDTH = 0.5


def default_node_names(n_nodes):
    return tuple(f"X{i}" for i in range(n_nodes))


class GraphFormat(str, enum.Enum):
    JSON = "json"
    CSV = "csv"
    DOT = "dot"


@dataclass(frozen=True)
class EdgeRecord:
    source: int
    sink: int
    lag: int
    cmi: float
    p_value: float

    def __post_init__(self):
        object.__setattr__(self, "cmi", float(self.cmi))
        object.__setattr__(self, "p_value", float(self.p_value))
        if self.lag < 1:
            raise GraphError(f"Edge lag must be at least 1, got {self.lag}")
        if not 0 < self.p_value <= 1:
            raise GraphError(f"Edge p-value must lie in (0, 1], got {self.p_value}")

    @property
    def triple(self):
        return (self.source, self.sink, self.lag)


@dataclass(frozen=True)
class CausalGraph:
    """Directed multigraph; one edge per distinct (source, sink, lag), sorted."""
    n_nodes: int
    node_names: tuple = None
    edges: tuple = ()

    def __post_init__(self):
        names = default_node_names(self.n_nodes) if self.node_names is None else tuple(self.node_names)
        if len(names) != self.n_nodes:
            raise GraphError(f"Got {len(names)} node names for {self.n_nodes} nodes")
        if len(set(names)) != len(names):
            raise GraphError("Node names must be unique")
        edges = tuple(sorted(self.edges, key=lambda edge: edge.triple))
        seen = set()
        for edge in edges:
            if not (0 <= edge.source < self.n_nodes and 0 <= edge.sink < self.n_nodes):
                raise GraphError(f"Edge {edge.triple} references a node outside 0..{self.n_nodes - 1}")
            if edge.triple in seen:
                raise DuplicateEdgeTriple(f"Duplicate edge (source, sink, lag) = {edge.triple}")
            seen.add(edge.triple)
        object.__setattr__(self, "node_names", names)
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float


def to_table(graph):
    """Edge table as a data frame: one row per edge, sorted by (source, sink, lag), nodes by name."""
    names = graph.node_names
    rows = [
        (names[edge.source], names[edge.sink], edge.lag, edge.cmi, edge.p_value)
        for edge in graph.edges
    ]
    return pd.DataFrame(rows, columns=list(TABLE_HEADER))


def _render_json(graph):
    from rest_framework.renderers import JSONRenderer

    from . import conf
    conf.setup()
    from .serializers import CausalGraphSerializer

    return JSONRenderer().render(CausalGraphSerializer(graph).data, renderer_context={"indent": 2})


def _render_csv(graph):
    buffer = io.StringIO()
    to_table(graph).to_csv(buffer, index=False, lineterminator="\n", float_format=round_trip)
    return buffer.getvalue().encode("utf-8")


def _quote(name):
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render_dot(graph):
    names = graph.node_names
    strongest = max((edge.cmi for edge in graph.edges), default=0.0)
    lines = ["digraph causal_network {", "  node [shape=circle];"]
    lines.extend(f"  {_quote(name)};" for name in names)
    for edge in graph.edges:
        if strongest > 0:
            penwidth = max(PEN_SCALE * edge.cmi / strongest, MIN_PENWIDTH)
        else:
            penwidth = 1.0
        lines.append(
            f"  {_quote(names[edge.source])} -> {_quote(names[edge.sink])} "
            f"[label=\"lag={edge.lag}\", penwidth={penwidth:.4g}, cmi={edge.cmi!r}, p_value={edge.p_value!r}];"
        )
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


RENDERERS = {
    GraphFormat.JSON: _render_json,
    GraphFormat.CSV: _render_csv,
    GraphFormat.DOT: _render_dot,
}


def serialize(graph, format=GraphFormat.JSON):
    return RENDERERS[GraphFormat(format)](graph)


def _first_error(errors, path=""):
    """Locate the first field error in a DRF error structure, as ``edges[3].sink``-style path."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            if value:
                segment = "" if key == "non_field_errors" else str(key)
                return _first_error(value, f"{path}.{segment}" if path and segment else path or segment)
    elif isinstance(errors, list):
        for index, item in enumerate(errors):
            if isinstance(item, (dict, list)):
                if item:
                    return _first_error(item, f"{path}[{index}]")
            else:
                return path, str(item)
    return path, str(errors)


def deserialize_json(data):
    """Inverse of :func:`serialize` with the JSON format."""
    from rest_framework.exceptions import ParseError
    from rest_framework.parsers import JSONParser

    from . import conf
    conf.setup()
    from .serializers import CausalGraphSerializer

    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        payload = JSONParser().parse(io.BytesIO(data))
    except ParseError as exc:
        raise SchemaError("", f"Malformed JSON: {exc.detail}") from exc

    serializer = CausalGraphSerializer(data=payload)
    if not serializer.is_valid():
        path, message = _first_error(serializer.errors)
        logger.warning(f"Graph JSON rejected at {path or '<root>'}: {message}")
        raise SchemaError(path, message)
    return serializer.save()


def evaluate(predicted, truth, ignore_lags=False):
    """Compare edge sets by (source, sink, lag), or by (source, sink) when ``ignore_lags``."""
    if predicted.n_nodes != truth.n_nodes:
        raise NodeCountMismatch(f"Predicted graph has {predicted.n_nodes} nodes, truth has {truth.n_nodes}")
    if ignore_lags:
        key = lambda edge: (edge.source, edge.sink)  # noqa: E731
    else:
        key = lambda edge: edge.triple  # noqa: E731
    found = {key(edge) for edge in predicted.edges}
    expected = {key(edge) for edge in truth.edges}

    tp = len(found & expected)
    fp = len(found - expected)
    fn = len(expected - found)
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(tp, fp, fn, precision, recall, f1)


def filter_edges(graph, min_cmi):
    return replace(graph, edges=tuple(edge for edge in graph.edges if edge.cmi >= min_cmi))


def to_adjacency(graph, weight="cmi"):
    """Matrix with ``[i, j]`` summing the edges j -> i over lags, by ``cmi`` or ``count``."""
    if weight not in ("cmi", "count"):
        raise ValueError(f"weight must be 'cmi' or 'count', got '{weight}'")
    matrix = np.zeros((graph.n_nodes, graph.n_nodes))
    for edge in graph.edges:
        matrix[edge.sink, edge.source] += edge.cmi if weight == "cmi" else 1.0
    return matrix


def to_networkx(graph):
    """``networkx.MultiDiGraph`` keyed by lag, nodes labelled by name."""
    import networkx as nx

    network = nx.MultiDiGraph()
    network.add_nodes_from(graph.node_names)
    for edge in graph.edges:
        network.add_edge(
            graph.node_names[edge.source],
            graph.node_names[edge.sink],
            key=edge.lag,
            lag=edge.lag,
            cmi=edge.cmi,
            p_value=edge.p_value,
        )
    return network


def read_graph(path):
    """Load a graph JSON file; unreadable files raise :class:`MalformedInput`."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise MalformedInput(f"Cannot read graph {path}: {str(e)}")
    logger.debug(f"Loading graph from {path}")
    return deserialize_json(data)
