import io
import json

import numpy as np
import pytest
from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError

from centropy.graph import read_graph
from centropy.manifest import read_manifest
from centropy.timeseries import read_csv, write_csv


def run(*args, **options):
    out = io.StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


def synth(tmp_path, name="data", **options):
    data, truth = tmp_path / f"{name}.csv", tmp_path / f"{name}-truth.json"
    options = {"n": 4, "T": 400, "rho": 0.7, "p": 0.3, "seed": 1, **options}
    run("synth", "linear", out=str(data), truth=str(truth), **options)
    return data, truth


def discover(data, out, **options):
    options = {"permutations": 50, "seed": 7, **options}
    return run("discover", input=str(data), out=str(out), **options)


def test_synth_writes_series_truth_and_manifest(tmp_path):
    data, truth = synth(tmp_path)
    series = read_csv(data)
    assert series.values.shape == (400, 4)
    assert read_graph(truth).n_nodes == 4
    manifest = read_manifest(tmp_path / "data.manifest.json")
    assert manifest.generator["process"] == "linear"
    assert manifest.generator["T"] == 400
    assert manifest.config is None


def test_synth_without_coupling_writes_empty_truth(tmp_path):
    _, truth = synth(tmp_path, p=0.0)
    assert json.loads(truth.read_text())["edges"] == []


def test_synth_poisson(tmp_path):
    data, truth = tmp_path / "counts.csv", tmp_path / "counts-truth.json"
    run("synth", "poisson", n=3, T=100, seed=2, out=str(data), truth=str(truth))
    values = read_csv(data).values
    assert np.all(values == np.round(values))


def test_synth_rejects_out_of_range_coupling(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        synth(tmp_path, rho=1.5)
    assert excinfo.value.returncode == 3


def test_discover_writes_graph_table_and_manifest(tmp_path):
    data, _ = synth(tmp_path)
    out = tmp_path / "g.json"
    discover(data, out, dot=str(tmp_path / "g.dot"))

    graph = read_graph(out)
    assert graph.node_names == ("X0", "X1", "X2", "X3")
    table = (tmp_path / "g.csv").read_text().splitlines()
    assert table[0] == "Source,Sink,Lag,CMI,P-value"
    assert len(table) == len(graph.edges) + 1
    assert (tmp_path / "g.dot").read_text().startswith("digraph")

    manifest = read_manifest(tmp_path / "g.manifest.json")
    assert manifest.input_path == str(data)
    assert manifest.config.permutations == 50
    assert manifest.config.seed == 7
    assert manifest.outputs["graph"] == str(out)


def test_discover_is_deterministic(tmp_path):
    data, _ = synth(tmp_path)
    discover(data, tmp_path / "a.json")
    discover(data, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_discover_output_does_not_depend_on_threads(tmp_path):
    data, _ = synth(tmp_path)
    discover(data, tmp_path / "serial.json", threads=1)
    discover(data, tmp_path / "threaded.json", threads=8)
    assert (tmp_path / "serial.json").read_bytes() == (tmp_path / "threaded.json").read_bytes()


def test_discover_output_does_not_depend_on_permutation_threads(tmp_path):
    data, _ = synth(tmp_path)
    discover(data, tmp_path / "serial.json")
    discover(data, tmp_path / "nested.json", threads=2, permutation_threads=3)
    assert (tmp_path / "serial.json").read_bytes() == (tmp_path / "nested.json").read_bytes()


def test_discover_threads_fall_back_to_settings(tmp_path, settings):
    settings.CENTROPY_THREADS = 3
    data, _ = synth(tmp_path)
    discover(data, tmp_path / "a.json")
    discover(data, tmp_path / "b.json", threads=1)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_discover_replays_manifest(tmp_path):
    data, _ = synth(tmp_path)
    discover(data, tmp_path / "g.json", alpha=0.01, estimator="knn", k=3, permutations=20)
    run("discover", manifest=str(tmp_path / "g.manifest.json"), out=str(tmp_path / "replay.json"))
    assert (tmp_path / "g.json").read_bytes() == (tmp_path / "replay.json").read_bytes()
    replayed = read_manifest(tmp_path / "replay.manifest.json").config
    assert replayed.estimator.k_neighbors == 3
    assert replayed.alpha_forward == replayed.alpha_backward == 0.01


def test_discover_recovers_synthetic_truth(tmp_path):
    data, truth = synth(tmp_path, T=1000)
    discover(data, tmp_path / "g.json", forward_test="max", alpha=0.01, permutations=100)
    report = json.loads(run("eval", str(tmp_path / "g.json"), str(truth)))
    assert report["recall"] == 1.0


def test_discover_poisson_on_non_counts_exits_4(tmp_path):
    data = tmp_path / "data.csv"
    write_csv(data, np.array([[1.0, 2.0], [2.5, 1.0]] * 10), ["a", "b"])
    with pytest.raises(CommandError) as excinfo:
        discover(data, tmp_path / "g.json", estimator="poisson")
    assert excinfo.value.returncode == 4
    assert "NonCountData" in str(excinfo.value)
    assert "target a" in str(excinfo.value)


def test_discover_malformed_csv_exits_2(tmp_path):
    data = tmp_path / "data.csv"
    data.write_text("a,b\n1,2\n3,x\n")
    with pytest.raises(CommandError) as excinfo:
        discover(data, tmp_path / "g.json")
    assert excinfo.value.returncode == 2
    assert "row 3" in str(excinfo.value)
    assert "column 2" in str(excinfo.value)


@pytest.mark.parametrize(
    "options",
    [{"alpha": 1.5}, {"permutations": 0}, {"max_lag": 0}, {"threads": -1}, {"permutation_threads": -1}],
)
def test_discover_invalid_config_exits_3(tmp_path, options):
    data, _ = synth(tmp_path)
    with pytest.raises(CommandError) as excinfo:
        discover(data, tmp_path / "g.json", **options)
    assert excinfo.value.returncode == 3


def test_discover_short_series_exits_3(tmp_path):
    data = tmp_path / "data.csv"
    write_csv(data, np.zeros((2, 2)))
    with pytest.raises(CommandError) as excinfo:
        discover(data, tmp_path / "g.json")
    assert excinfo.value.returncode == 3


def test_discover_needs_input_or_manifest(tmp_path):
    with pytest.raises(CommandError) as excinfo:
        run("discover", out=str(tmp_path / "g.json"))
    assert excinfo.value.returncode == 3


def test_eval_identical_graphs(tmp_path):
    _, truth = synth(tmp_path)
    report = json.loads(run("eval", str(truth), str(truth)))
    assert (report["precision"], report["recall"], report["f1"]) == (1.0, 1.0, 1.0)


def test_eval_empty_prediction(tmp_path):
    _, truth = synth(tmp_path, p=0.6)
    _, empty = synth(tmp_path, name="empty", p=0.0)
    report = json.loads(run("eval", str(empty), str(truth)))
    assert report["recall"] == 0.0
    assert report["precision"] == 1.0


def test_eval_node_count_mismatch_exits_3(tmp_path):
    _, small = synth(tmp_path, name="small", n=3)
    _, large = synth(tmp_path, name="large", n=4)
    with pytest.raises(CommandError) as excinfo:
        run("eval", str(small), str(large))
    assert excinfo.value.returncode == 3


def test_plot_writes_dot_and_prints_render_command(tmp_path):
    _, truth = synth(tmp_path, p=0.6)
    output = run("plot", str(truth), out=str(tmp_path / "g.dot"))
    dot = (tmp_path / "g.dot").read_text()
    assert dot.count("->") == len(read_graph(truth).edges)
    assert "dot -Tpng" in output


def test_plot_min_cmi_filters_edges(tmp_path):
    _, truth = synth(tmp_path, p=0.6)
    run("plot", str(truth), out=str(tmp_path / "g.dot"), min_cmi=0.5)
    assert "->" not in (tmp_path / "g.dot").read_text()


def test_plot_malformed_graph_exits_2(tmp_path):
    graph = tmp_path / "g.json"
    graph.write_text('{"n_nodes": 2, "edges": [{"source": 0, "sink": 5, "lag": 1, "cmi": 0.1, "p_value": 0.5}]}')
    with pytest.raises(CommandError) as excinfo:
        run("plot", str(graph))
    assert excinfo.value.returncode == 2
    assert "edges[0].sink" in str(excinfo.value)


def test_project_installs_no_model_apps():
    labels = {config.label for config in apps.get_app_configs()}
    assert labels == {"rest_framework", "centropy"}
    assert not list(apps.get_models())
