import io
import json

import numpy as np
import pytest

from busfactor import experiments as ex
from busfactor.generators import fig1_toy, power_law_degrees, power_law_graph
from busfactor.measures import analyze

from conftest import complete


@pytest.fixture(scope="module")
def small_graph():
    return power_law_graph(120, 160, 1)


def test_derive_seed_stable_and_distinct():
    assert ex.derive_seed(0, "density", 1, 2) == ex.derive_seed(0, "density", 1, 2)
    seeds = {ex.derive_seed(0, "density", lvl, rep) for lvl in range(5) for rep in range(5)}
    assert len(seeds) == 25
    assert ex.derive_seed(0, "a", 0, 0) != ex.derive_seed(1, "a", 0, 0)


# -- density -----------------------------------------------------------------

def test_density_total_zero_is_baseline(small_graph):
    (row,) = ex.run_density_sweep(small_graph, 10, 0, "add", 0)
    base = analyze(small_graph)
    assert (row.mrs, row.mcs, row.robustness_gauss) == (base.mrs_size, base.mcs_size,
                                                        base.robustness_gauss)


def test_density_rows_and_edges(small_graph):
    before = small_graph.edge_count
    rows = ex.run_density_sweep(small_graph, 20, 100, "add", 3)
    assert [r.perturbation_level for r in rows] == [20, 40, 60, 80, 100]
    assert [r.edges for r in rows] == [before + lvl for lvl in (20, 40, 60, 80, 100)]
    # the input graph is immutable and unchanged
    assert small_graph.edge_count == before
    rows = ex.run_density_sweep(small_graph, 20, 100, "remove", 3)
    assert [r.edges for r in rows] == [before - lvl for lvl in (20, 40, 60, 80, 100)]


def test_density_reproducible(small_graph):
    a = ex.run_density_sweep(small_graph, 25, 100, "remove", 9)
    b = ex.run_density_sweep(small_graph, 25, 100, "remove", 9)
    assert [r.measures() for r in a] == [r.measures() for r in b]


def test_density_saturation():
    g = complete(3, 3)
    with pytest.raises(ex.ExperimentError, match="saturated"):
        ex.run_density_sweep(g, 1, 1, "add", 0)


def test_density_errors(small_graph):
    with pytest.raises(ex.ExperimentError):
        ex.run_density_sweep(small_graph, 10, small_graph.edge_count + 10, "remove", 0)
    with pytest.raises(ex.ExperimentError):
        ex.run_density_sweep(small_graph, 7, 10, "add", 0)
    with pytest.raises(ex.ExperimentError):
        ex.run_density_sweep(small_graph, 10, 10, "sideways", 0)


def test_density_add_trend(small_graph):
    rows = ex.run_density_sweep(small_graph, 50, 1000, "add", 0)
    levels = [r.perturbation_level for r in rows]
    assert ex.spearman(levels, [r.mcs for r in rows]) > 0.9
    assert ex.spearman(levels, [r.robustness_trapezoid for r in rows]) > 0.9


# -- redundancy --------------------------------------------------------------

def test_singletons_round_robin():
    g = fig1_toy()
    rows = ex.run_redundancy_sweep(g, "singletons", 4, 8, 0)
    assert [(r.n, r.edges) for r in rows] == [(13, 16), (17, 20)]


def test_duplicates_clone_highest_degree_first():
    g = fig1_toy()
    (row,) = ex.run_redundancy_sweep(g, "duplicates", 1, 1, 0)
    # the clone of p1 brings four new edges
    assert (row.n, row.edges) == (10, 16)


def test_redundancy_total_zero(small_graph):
    (row,) = ex.run_redundancy_sweep(small_graph, "duplicates", 5, 0, 0)
    assert row.n == small_graph.n


def test_singletons_trend(small_graph):
    rows = ex.run_redundancy_sweep(small_graph, "singletons", 40, 400, 0)
    mrs = [r.mrs for r in rows]
    mcs = [r.mcs for r in rows]
    rob = [r.robustness_trapezoid for r in rows]
    assert all(b > a for a, b in zip(mrs, mrs[1:]))
    assert all(b > a for a, b in zip(mcs, mcs[1:]))
    assert all(b < a for a, b in zip(rob, rob[1:]))


def test_duplicates_mcs_saturates(small_graph):
    rows = ex.run_redundancy_sweep(small_graph, "duplicates", 20, 240, 0)
    mcs = [r.mcs for r in rows]
    rob = [r.robustness_trapezoid for r in rows]
    assert max(mcs) == mcs[-1]
    # the growth over the second half is much smaller than over the first
    half = len(mcs) // 2
    assert mcs[-1] - mcs[half] < mcs[half] - mcs[0]
    assert max(rob) > rob[0]


def test_redundancy_bad_mode(small_graph):
    with pytest.raises(ex.ExperimentError):
        ex.run_redundancy_sweep(small_graph, "triplets", 1, 1, 0)


# -- assortativity -----------------------------------------------------------

def test_assortativity_replicas_differ_but_reproduce():
    seq = power_law_degrees(60, 80, 2)
    a = ex.run_assortativity_sweep(seq, [0.0], 2, 5, sweep_count=2)
    b = ex.run_assortativity_sweep(seq, [0.0], 2, 5, sweep_count=2)
    assert len(a) == 2
    assert a[0].seed != a[1].seed
    assert a[0].measures() != a[1].measures()
    assert [r.measures() for r in a] == [r.measures() for r in b]
    assert all(r.r is not None and r.parameter == 0.0 for r in a)


def test_assortativity_row_count():
    seq = power_law_degrees(30, 40, 0)
    rows = ex.run_assortativity_sweep(seq, [-0.01, 0.0, 0.01], 2, 0, sweep_count=1)
    assert [(r.perturbation_level, r.replicate) for r in rows] == [
        (0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]


# -- strategies and scaling --------------------------------------------------

def test_strategy_comparison_shape():
    rows = ex.run_strategy_comparison(80, 100, 2, 0, strategies=("degree", "random", "betweenness"))
    assert [(r.replicate, r.strategy) for r in rows] == [
        (0, "degree"), (0, "random"), (0, "betweenness"),
        (1, "degree"), (1, "random"), (1, "betweenness")]
    again = ex.run_strategy_comparison(80, 100, 2, 0, strategies=("degree", "random", "betweenness"))
    assert [r.measures() for r in rows] == [r.measures() for r in again]


def test_scaling_bench_small():
    rows = ex.run_scaling_bench([10**4], 0)
    assert [r.experiment_id for r in rows] == ["scaling-mrs", "scaling-mcs", "scaling-robustness"]
    assert all(r.runtime_ms > 0 and r.edges == 10**4 for r in rows)
    again = ex.run_scaling_bench([10**4], 0)
    assert [r.measures() for r in rows] == [r.measures() for r in again]
    with pytest.raises(ex.ExperimentError):
        ex.run_scaling_bench([10, 5], 0)


# -- output ------------------------------------------------------------------

def test_csv_roundtrip():
    seq = power_law_degrees(30, 40, 0)
    rows = ex.run_assortativity_sweep(seq, [0.0], 1, 0, sweep_count=1)
    rows += ex.run_density_sweep(fig1_toy(), 2, 4, "add", 0)
    buf = io.StringIO()
    ex.write_csv(rows, buf)
    header = buf.getvalue().splitlines()[0].split(",")
    assert header == ex.COLUMNS
    back = ex.read_csv(io.StringIO(buf.getvalue()))
    assert [r.measures() for r in back] == [r.measures() for r in rows]


def test_manifest(tmp_path):
    path = tmp_path / "m.json"
    ex.write_manifest(path, "density", {"seed": 1})
    doc = json.loads(path.read_text())
    assert doc["experiment"] == "density"
    assert doc["parameters"] == {"seed": 1}
    assert doc["columns"] == ex.COLUMNS


def test_group_means_and_spearman():
    rows = ex.run_density_sweep(fig1_toy(), 2, 6, "add", 0)
    means = ex.group_means(rows, "perturbation_level", "mcs")
    assert list(means) == [2, 4, 6]
    assert ex.spearman([1, 2, 3], [2, 4, 9]) == pytest.approx(1.0)
    assert np.isclose(ex.spearman([1, 2, 3], [3, 2, 1]), -1.0)
