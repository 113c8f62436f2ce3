"""Desk-scale sensitivity sweeps and benchmarks.

Each sweep returns a list of :class:`ExperimentRow`. Graph perturbations
are cumulative across levels but always produce a fresh graph; the input
graph is never touched.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import spearmanr

from . import __version__
from .generators import (DegreeSequence, RewiringConfig, configuration_model, degree_correlation,
                         j_grid, power_law_graph, random_bipartite, rewire)
from .graph import BipartiteGraph, Threshold, build_graph
from .measures import (analyze, gauss_area, mcs_percolation, mrs_greedy, mrs_in_order,
                       normalized_bus_factor, robustness_curve)
from .strategies import degree_order, removal_order

EXPERIMENTS = ("density", "redundancy", "assortativity", "strategies", "scaling")

# desk-scale defaults: a tenth of the published network sizes
DESK_PEOPLE = 750
DESK_TASKS = 1000


class ExperimentError(ValueError):
    pass


@dataclass
class ExperimentRow:
    experiment_id: str
    perturbation_level: int
    replicate: int
    seed: int
    mrs: int
    mcs: int
    robustness_trapezoid: float
    robustness_gauss: float
    people_equivalent: float
    r: float | None = None
    runtime_ms: float = 0.0
    parameter: float | None = None
    strategy: str = "degree"
    n: int = 0
    m: int = 0
    edges: int = 0
    gauss_area: int = 0

    def measures(self) -> tuple:
        """Everything except timing, for reproducibility checks."""
        d = dataclasses.asdict(self)
        d.pop("runtime_ms")
        return tuple(d.values())


COLUMNS = [f.name for f in dataclasses.fields(ExperimentRow)]


def derive_seed(master_seed: int, experiment_id: str, level: int, replica: int) -> int:
    key = f"{master_seed}:{experiment_id}:{level}:{replica}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big") >> 1


def measure(g: BipartiteGraph, experiment_id: str, level: int, replicate: int, seed: int,
            t: Threshold | str = "1/2", strategy: str = "degree", with_r: bool = False,
            parameter: float | None = None) -> ExperimentRow:
    start = time.perf_counter()
    report = analyze(g, t, strategy, seed)
    elapsed = (time.perf_counter() - start) * 1000
    r = None
    if with_r:
        try:
            r = degree_correlation(g)
        except ValueError:
            r = None
    return ExperimentRow(
        experiment_id=experiment_id,
        perturbation_level=level,
        replicate=replicate,
        seed=seed,
        mrs=report.mrs_size,
        mcs=report.mcs_size,
        robustness_trapezoid=report.robustness_trapezoid,
        robustness_gauss=report.robustness_gauss,
        people_equivalent=report.people_equivalent,
        r=r,
        runtime_ms=elapsed,
        parameter=parameter,
        strategy=strategy,
        n=g.n,
        m=g.m,
        edges=g.edge_count,
        gauss_area=report.gauss_area,
    )


def _levels(batch: int, total: int) -> list[int]:
    if batch < 1 or total < 0:
        raise ExperimentError("batch must be >= 1 and total >= 0")
    if total % batch:
        raise ExperimentError(f"total {total} is not a multiple of batch {batch}")
    return list(range(batch, total + 1, batch))


def _graph_from_keys(keys, n, m) -> BipartiteGraph:
    arr = np.fromiter(keys, dtype=np.int64)
    return build_graph(np.column_stack(np.divmod(arr, m)), n, m)


# -- Q1: density -------------------------------------------------------------

def run_density_sweep(g: BipartiteGraph, batch: int, total: int, direction: str, seed: int,
                      t: Threshold | str = "1/2", strategy: str = "degree") -> list[ExperimentRow]:
    """Add or remove ``batch`` uniformly chosen edges per level, ``total`` in all."""
    if direction not in ("add", "remove"):
        raise ExperimentError(f"direction must be 'add' or 'remove', got {direction!r}")
    exp_id = f"density-{direction}"
    if total == 0:
        return [measure(g, exp_id, 0, 0, seed, t, strategy)]
    levels = _levels(batch, total)
    n, m = g.n, g.m
    if direction == "remove" and total >= g.edge_count:
        raise ExperimentError(f"cannot remove {total} of {g.edge_count} edges")
    rng = random.Random(derive_seed(seed, exp_id, 0, 0))
    present = {p * m + x for p, ts in enumerate(g.person_adj) for x in ts}
    rows = []
    for level in levels:
        if direction == "add":
            absent = n * m - len(present)
            if absent < batch:
                raise ExperimentError(
                    f"graph saturated: only {absent} absent pairs left at level {level - batch}")
            if absent * 4 < n * m:
                pool = sorted(set(range(n * m)) - present)
                present.update(rng.sample(pool, batch))
            else:
                added = 0
                while added < batch:
                    key = rng.randrange(n * m)
                    if key not in present:
                        present.add(key)
                        added += 1
        else:
            present.difference_update(rng.sample(sorted(present), batch))
        h = _graph_from_keys(sorted(present), n, m)
        rows.append(measure(h, exp_id, level, 0, seed, t, strategy))
    return rows


# -- Q2: singletons and duplicates -------------------------------------------

def run_redundancy_sweep(g: BipartiteGraph, mode: str, batch: int, total: int, seed: int,
                         t: Threshold | str = "1/2", strategy: str = "degree") -> list[ExperimentRow]:
    """Add singletons (round-robin over tasks) or clones of existing people
    (highest degree first, cycling once everyone has been cloned)."""
    if mode not in ("singletons", "duplicates"):
        raise ExperimentError(f"mode must be 'singletons' or 'duplicates', got {mode!r}")
    exp_id = f"redundancy-{mode}"
    if total == 0:
        return [measure(g, exp_id, 0, 0, seed, t, strategy)]
    levels = _levels(batch, total)
    if mode == "duplicates" and g.n == 0:
        raise ExperimentError("no people to duplicate")
    if mode == "singletons" and g.m == 0:
        raise ExperimentError("no tasks to attach singletons to")
    clone_order = degree_order(g).order
    adj = [list(ts) for ts in g.person_adj]
    rows = []
    added = 0
    for level in levels:
        while added < level:
            if mode == "singletons":
                adj.append([added % g.m])
            else:
                adj.append(list(g.person_adj[clone_order[added % g.n]]))
            added += 1
        edges = [(p, x) for p, ts in enumerate(adj) for x in ts]
        h = build_graph(edges, len(adj), g.m)
        rows.append(measure(h, exp_id, level, 0, seed, t, strategy))
    return rows


# -- Q3: degree correlation ----------------------------------------------------

def run_assortativity_sweep(degrees: DegreeSequence, j_values: Sequence[float], replicas: int,
                            seed: int, t: Threshold | str = "1/2", strategy: str = "degree",
                            sweep_count: float = 20) -> list[ExperimentRow]:
    """Configuration-model graph per replica, Metropolis-rewired at each ``J``.

    The base graph depends only on ``(seed, replica)`` so every ``J`` of a
    replica starts from the same network.
    """
    degrees.validate()
    rows = []
    for r in range(replicas):
        base = configuration_model(degrees, derive_seed(seed, "assortativity-base", 0, r))
        for level, J in enumerate(j_values):
            s = derive_seed(seed, "assortativity", level, r)
            h, _ = rewire(base, RewiringConfig(J=J, sweep_count=sweep_count, seed=s))
            rows.append(measure(h, "assortativity", level, r, s, t, strategy, with_r=True,
                                parameter=J))
    return rows


# -- strategy comparison -----------------------------------------------------

def run_strategy_comparison(n: int, m: int, replicas: int, seed: int,
                            strategies: Iterable[str] = ("degree", "random"),
                            t: Threshold | str = "1/2") -> list[ExperimentRow]:
    """Each strategy on the same power-law graphs.

    MRS uses the lazy greedy for ``degree`` and a fixed processing order
    for every other strategy.
    """
    t = Threshold.parse(t)
    strategies = list(strategies)
    rows = []
    for r in range(replicas):
        gseed = derive_seed(seed, "strategies-graph", 0, r)
        g = power_law_graph(n, m, gseed)
        for name in strategies:
            start = time.perf_counter()
            order = removal_order(g, name, derive_seed(seed, f"strategies-{name}", 0, r))
            if name == "degree":
                mrs, _ = mrs_greedy(g, t)
            else:
                mrs, _ = mrs_in_order(g, t, order)
            mcs = mcs_percolation(g, t, order)
            curve = robustness_curve(g, order)
            elapsed = (time.perf_counter() - start) * 1000
            gauss = normalized_bus_factor(curve, "gauss")
            rows.append(ExperimentRow(
                experiment_id="strategies", perturbation_level=0, replicate=r, seed=gseed,
                mrs=mrs, mcs=mcs,
                robustness_trapezoid=normalized_bus_factor(curve, "trapezoid"),
                robustness_gauss=gauss, people_equivalent=gauss * g.n,
                runtime_ms=elapsed, strategy=name, n=g.n, m=g.m, edges=g.edge_count,
                gauss_area=gauss_area(curve)))
    return rows


# -- runtime scaling ---------------------------------------------------------

SCALING_THRESHOLD = Threshold(9999, 10000)


def scaling_graph(num_edges: int, seed: int, mean_degree: int = 20) -> BipartiteGraph:
    """Random graph with fixed mean degree, so size grows with edge count."""
    side = max(2, -(-num_edges // mean_degree))
    side = max(side, int(np.ceil(np.sqrt(num_edges))) + 1)
    return random_bipartite(side, side, num_edges, seed)


def run_scaling_bench(sizes: Sequence[int], seed: int, repeats: int = 1) -> list[ExperimentRow]:
    """Time each measure on random graphs of the given edge counts.

    ``t = 9999/10000`` forces near-complete traversal. Timings are the
    best of ``repeats`` runs; the removal order is computed outside the
    timed region.
    """
    if list(sizes) != sorted(sizes):
        raise ExperimentError("sizes must be ascending")
    t = SCALING_THRESHOLD
    rows = []
    for level, size in enumerate(sizes):
        gseed = derive_seed(seed, "scaling", level, 0)
        g = scaling_graph(size, gseed)
        order = degree_order(g)
        timings = {"mrs": [], "mcs": [], "robustness": []}
        for _ in range(repeats):
            t0 = time.perf_counter()
            mrs, _ = mrs_greedy(g, t)
            t1 = time.perf_counter()
            mcs = mcs_percolation(g, t, order)
            t2 = time.perf_counter()
            curve = robustness_curve(g, order)
            t3 = time.perf_counter()
            timings["mrs"].append(t1 - t0)
            timings["mcs"].append(t2 - t1)
            timings["robustness"].append(t3 - t2)
        gauss = normalized_bus_factor(curve, "gauss")
        trap = normalized_bus_factor(curve, "trapezoid")
        for name, ts in timings.items():
            rows.append(ExperimentRow(
                experiment_id=f"scaling-{name}", perturbation_level=g.edge_count, replicate=0,
                seed=gseed, mrs=mrs, mcs=mcs, robustness_trapezoid=trap, robustness_gauss=gauss,
                people_equivalent=gauss * g.n, runtime_ms=min(ts) * 1000, n=g.n, m=g.m,
                edges=g.edge_count, gauss_area=gauss_area(curve)))
    return rows


# -- aggregation and output --------------------------------------------------

def spearman(xs, ys) -> float:
    return float(spearmanr(xs, ys).statistic)


def group_means(rows: Iterable[ExperimentRow], key: str, field: str) -> dict:
    acc: dict = {}
    for row in rows:
        v = getattr(row, field)
        if v is None:
            continue
        acc.setdefault(getattr(row, key), []).append(v)
    return {k: float(np.mean(v)) for k, v in sorted(acc.items())}


def write_csv(rows: Iterable[ExperimentRow], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(dataclasses.asdict(row))


def read_csv(fh) -> list[ExperimentRow]:
    types = {f.name: f.type for f in dataclasses.fields(ExperimentRow)}
    out = []
    for rec in csv.DictReader(fh):
        kw = {}
        for k, v in rec.items():
            typ = str(types[k])
            if v == "":
                kw[k] = None
            elif typ.startswith("int"):
                kw[k] = int(v)
            elif typ.startswith("float"):
                kw[k] = float(v)
            else:
                kw[k] = v
        out.append(ExperimentRow(**kw))
    return out


def manifest(experiment: str, params: dict) -> dict:
    return {
        "experiment": experiment,
        "toolkit": "busfactor",
        "version": __version__,
        "parameters": params,
        "columns": COLUMNS,
    }


def write_manifest(path, experiment: str, params: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest(experiment, params), fh, indent=2, sort_keys=True)
        fh.write("\n")


__all__ = [
    "EXPERIMENTS", "ExperimentRow", "ExperimentError", "derive_seed", "measure", "j_grid",
    "run_density_sweep", "run_redundancy_sweep", "run_assortativity_sweep",
    "run_strategy_comparison", "run_scaling_bench", "spearman", "group_means", "write_csv",
    "read_csv", "write_manifest", "power_law_graph", "DESK_PEOPLE", "DESK_TASKS",
]
