import io
import json
import string

import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st

from centropy.exceptions import DuplicateEdgeTriple, GraphError, NodeCountMismatch, SchemaError
from centropy.graph import (
    TABLE_HEADER,
    CausalGraph,
    EdgeRecord,
    GraphFormat,
    deserialize_json,
    evaluate,
    filter_edges,
    serialize,
    to_adjacency,
    to_networkx,
    to_table,
)


def edge(source, sink, lag=1, cmi=0.1, p_value=0.01):
    return EdgeRecord(source=source, sink=sink, lag=lag, cmi=cmi, p_value=p_value)


@pytest.fixture
def four_edges():
    return CausalGraph(n_nodes=5, edges=(edge(0, 1), edge(1, 2), edge(2, 3), edge(3, 4)))


@st.composite
def causal_graphs(draw):
    n_nodes = draw(st.integers(min_value=1, max_value=6))
    named = draw(st.booleans())
    names = None
    if named:
        names = draw(st.lists(
            st.text(alphabet=string.ascii_letters + string.digits + " _-\"", min_size=1, max_size=8),
            min_size=n_nodes, max_size=n_nodes, unique=True,
        ))
    triples = draw(st.lists(
        st.tuples(
            st.integers(0, n_nodes - 1), st.integers(0, n_nodes - 1), st.integers(1, 4),
        ),
        max_size=12, unique=True,
    ))
    reals = st.floats(allow_nan=False, allow_infinity=False)
    p_values = st.floats(min_value=0.0, max_value=1.0, exclude_min=True)
    edges = tuple(
        EdgeRecord(source, sink, lag, draw(reals), draw(p_values))
        for source, sink, lag in triples
    )
    return CausalGraph(n_nodes=n_nodes, node_names=names, edges=edges)


def test_edge_record_validation():
    with pytest.raises(GraphError):
        edge(0, 1, lag=0)
    with pytest.raises(GraphError):
        edge(0, 1, p_value=0.0)
    with pytest.raises(GraphError):
        edge(0, 1, p_value=1.5)


def test_graph_sorts_edges_and_names_nodes():
    graph = CausalGraph(n_nodes=3, edges=(edge(2, 0), edge(0, 1, lag=2), edge(0, 1, lag=1)))
    assert graph.node_names == ("X0", "X1", "X2")
    assert [e.triple for e in graph.edges] == [(0, 1, 1), (0, 1, 2), (2, 0, 1)]


def test_graph_rejects_duplicates_and_out_of_range_nodes():
    with pytest.raises(DuplicateEdgeTriple):
        CausalGraph(n_nodes=2, edges=(edge(0, 1), edge(0, 1, cmi=0.2)))
    with pytest.raises(GraphError):
        CausalGraph(n_nodes=2, edges=(edge(0, 2),))
    with pytest.raises(GraphError):
        CausalGraph(n_nodes=2, node_names=("a", "a"))


def test_table_of_empty_graph_is_header_only():
    table = to_table(CausalGraph(n_nodes=3))
    assert tuple(table.columns) == TABLE_HEADER
    assert table.empty
    assert serialize(CausalGraph(n_nodes=3), GraphFormat.CSV) == b"Source,Sink,Lag,CMI,P-value\n"


def test_table_row_uses_node_names():
    graph = CausalGraph(n_nodes=2, edges=(edge(0, 1, cmi=0.34, p_value=0.005),))
    table = to_table(graph)
    assert list(table.itertuples(index=False, name=None)) == [("X0", "X1", 1, 0.34, 0.005)]
    assert table["Lag"].dtype.kind == "i"


def test_csv_has_header_and_one_line_per_edge():
    graph = CausalGraph(n_nodes=3, edges=(edge(0, 1), edge(1, 2, cmi=0.25)))
    lines = serialize(graph, GraphFormat.CSV).decode().splitlines()
    assert lines == ["Source,Sink,Lag,CMI,P-value", "X0,X1,1,0.1,0.01", "X1,X2,1,0.25,0.01"]


def test_dot_of_empty_graph_lists_isolated_nodes():
    dot = serialize(CausalGraph(n_nodes=3), GraphFormat.DOT).decode()
    assert dot.startswith("digraph")
    assert "->" not in dot
    for name in ("X0", "X1", "X2"):
        assert f'"{name}";' in dot


def test_dot_edges_carry_lag_labels_and_pen_widths():
    graph = CausalGraph(n_nodes=2, edges=(edge(0, 1, cmi=0.4), edge(0, 1, lag=2, cmi=0.2)))
    dot = serialize(graph, "dot").decode()
    assert dot.count("->") == 2
    assert 'label="lag=1", penwidth=5' in dot
    assert 'label="lag=2", penwidth=2.5' in dot


def test_json_schema(four_edges):
    payload = json.loads(serialize(four_edges))
    assert payload["n_nodes"] == 5
    assert payload["node_names"] == ["X0", "X1", "X2", "X3", "X4"]
    assert payload["edges"][0] == {"source": 0, "sink": 1, "lag": 1, "cmi": 0.1, "p_value": 0.01}


@given(causal_graphs())
def test_json_round_trip_is_exact(graph):
    assert deserialize_json(serialize(graph, GraphFormat.JSON)) == graph


def test_json_reals_keep_all_digits():
    graph = CausalGraph(n_nodes=2, edges=(edge(0, 1, cmi=0.1 + 0.2, p_value=1 / 3),))
    restored = deserialize_json(serialize(graph))
    assert restored.edges[0].cmi == 0.30000000000000004
    assert restored.edges[0].p_value == 1 / 3


def test_deserialize_reports_path_of_out_of_range_sink():
    payload = {
        "n_nodes": 2,
        "edges": [
            {"source": 0, "sink": 1, "lag": 1, "cmi": 0.1, "p_value": 0.5},
            {"source": 0, "sink": 2, "lag": 1, "cmi": 0.1, "p_value": 0.5},
        ],
    }
    with pytest.raises(SchemaError) as excinfo:
        deserialize_json(json.dumps(payload))
    assert excinfo.value.path == "edges[1].sink"


def test_deserialize_reports_path_of_invalid_field():
    payload = {"n_nodes": 2, "edges": [{"source": 0, "sink": 1, "lag": 1, "cmi": 0.1, "p_value": 0}]}
    with pytest.raises(SchemaError) as excinfo:
        deserialize_json(json.dumps(payload))
    assert excinfo.value.path == "edges[0].p_value"


def test_deserialize_rejects_missing_fields_and_bad_json():
    with pytest.raises(SchemaError) as excinfo:
        deserialize_json(b'{"n_nodes": 2}')
    assert excinfo.value.path == "edges"
    with pytest.raises(SchemaError):
        deserialize_json(b"{not json")


def test_deserialize_rejects_duplicate_triples():
    payload = {
        "n_nodes": 2,
        "edges": [
            {"source": 0, "sink": 1, "lag": 1, "cmi": 0.1, "p_value": 0.5},
            {"source": 0, "sink": 1, "lag": 1, "cmi": 0.3, "p_value": 0.2},
        ],
    }
    with pytest.raises(DuplicateEdgeTriple):
        deserialize_json(json.dumps(payload))


def test_evaluate_identical_graphs(four_edges):
    report = evaluate(four_edges, four_edges)
    assert (report.precision, report.recall, report.f1) == (1.0, 1.0, 1.0)


def test_evaluate_empty_prediction(four_edges):
    report = evaluate(CausalGraph(n_nodes=5), four_edges)
    assert report.precision == 1.0
    assert report.recall == 0.0
    assert report.f1 == 0.0
    assert report.false_negatives == 4


def test_evaluate_one_extra_edge(four_edges):
    predicted = CausalGraph(n_nodes=5, edges=four_edges.edges + (edge(4, 0),))
    report = evaluate(predicted, four_edges)
    assert report.precision == pytest.approx(0.8)
    assert report.recall == 1.0
    assert report.f1 == pytest.approx(0.888888, abs=1e-5)


def test_evaluate_swapping_swaps_precision_and_recall(four_edges):
    predicted = CausalGraph(n_nodes=5, edges=(edge(0, 1), edge(4, 0), edge(3, 2)))
    forward = evaluate(predicted, four_edges)
    backward = evaluate(four_edges, predicted)
    assert (forward.precision, forward.recall) == (backward.recall, backward.precision)


def test_evaluate_ignore_lags():
    truth = CausalGraph(n_nodes=2, edges=(edge(0, 1, lag=1),))
    predicted = CausalGraph(n_nodes=2, edges=(edge(0, 1, lag=1), edge(0, 1, lag=2)))
    assert evaluate(predicted, truth).precision == 0.5
    assert evaluate(predicted, truth, ignore_lags=True).precision == 1.0


def test_evaluate_requires_same_node_count(four_edges):
    with pytest.raises(NodeCountMismatch):
        evaluate(CausalGraph(n_nodes=4), four_edges)


def test_filter_edges_drops_weak_edges():
    graph = CausalGraph(n_nodes=3, edges=(edge(0, 1, cmi=0.05), edge(1, 2, cmi=0.5)))
    assert [e.triple for e in filter_edges(graph, 0.1).edges] == [(1, 2, 1)]


def test_adjacency_sums_over_lags():
    graph = CausalGraph(n_nodes=2, edges=(edge(0, 1, cmi=0.25), edge(0, 1, lag=2, cmi=0.5)))
    np.testing.assert_array_equal(to_adjacency(graph), [[0.0, 0.0], [0.75, 0.0]])
    np.testing.assert_array_equal(to_adjacency(graph, weight="count"), [[0.0, 0.0], [2.0, 0.0]])
    with pytest.raises(ValueError):
        to_adjacency(graph, weight="p_value")


def test_networkx_multigraph_keeps_one_edge_per_lag():
    graph = CausalGraph(n_nodes=2, node_names=("a", "b"), edges=(edge(0, 1), edge(0, 1, lag=3)))
    network = to_networkx(graph)
    assert set(network.nodes) == {"a", "b"}
    assert network.number_of_edges("a", "b") == 2
    assert network["a"]["b"][3]["cmi"] == 0.1


def test_csv_quotes_names_and_keeps_reals_exact():
    graph = CausalGraph(
        n_nodes=2, node_names=("a,b", "c"), edges=(edge(0, 1, cmi=0.1 + 0.2, p_value=1 / 3),)
    )
    frame = pd.read_csv(io.BytesIO(serialize(graph, GraphFormat.CSV)), float_precision="round_trip")
    assert list(frame["Source"]) == ["a,b"]
    assert frame["CMI"][0] == 0.1 + 0.2
    assert frame["P-value"][0] == 1 / 3
