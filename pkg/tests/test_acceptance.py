"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from busfactor import experiments as ex
from busfactor import generators as gen
from busfactor import oracle
from busfactor.graph import Threshold, isolated_task_count, tau
from busfactor.measures import (
    analyze,
    gauss_area,
    mcs_percolation,
    mrs_greedy,
    normalized_bus_factor,
    robustness_curve,
)
from busfactor.strategies import degree_order, random_order

from conftest import ACCEPTANCE_LINES, complete, random_graph

HALF = Threshold(1, 2)
PROP_THRESHOLDS = [Threshold(1, 4), Threshold(1, 3), Threshold(1, 2), Threshold(2, 3), Threshold(3, 4)]


def verdict(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_fig1_golden():
    start = time.perf_counter()
    g = gen.fig1_toy()
    rep = analyze(g, HALF, "degree")
    area, best = oracle.exact_robustness(g, oracle.OracleLimits(16, 9))
    optimal = robustness_curve(g, best)
    gauss = normalized_bus_factor(optimal, "gauss")
    elapsed = time.perf_counter() - start
    ok = (rep.mrs_size == 8 and rep.mcs_size == 7 and gauss == 0.25
          and gauss * g.n == 2.25 and rep.people_equivalent == 2.25 and elapsed < 1.0)
    verdict(1, "toy project golden values", ok,
            f"MRS={rep.mrs_size} MCS={rep.mcs_size} gauss={gauss} "
            f"people_equivalent={gauss * g.n} in {elapsed:.3f}s")


def test_02_complete_graph_normalization():
    bad = []
    for n in range(2, 7):
        for m in range(2, 7):
            g = complete(n, m)
            for order in (degree_order(g), random_order(g, n * 10 + m)):
                curve = robustness_curve(g, order)
                vals = (normalized_bus_factor(curve, "gauss"), normalized_bus_factor(curve, "trapezoid"))
                if vals != (1.0, 1.0):
                    bad.append((n, m, vals))
    verdict(2, "K_{n,m} normalizes to 1.0 in both variants", not bad,
            f"{25 - len({b[:2] for b in bad})}/25 sizes exact")


def test_03_proposition1():
    start = time.perf_counter()
    rng = random.Random(2024)
    failures = 0
    checks = 0
    for _ in range(200):
        g = random_graph(rng, 8, 8, cover_tasks=True)
        for t in PROP_THRESHOLDS:
            checks += 1
            if not oracle.proposition1(g, t)["holds"]:
                failures += 1
    elapsed = time.perf_counter() - start
    verdict(3, "Z_min,t = MCS_{1-t} - 1 on 200 random graphs", failures == 0 and elapsed < 300,
            f"{checks - failures}/{checks} identities hold in {elapsed:.1f}s")


def test_04_tree_ratio():
    details = []
    ok = True
    for k in (3, 4, 5):
        g = gen.t5_tree(k)
        worst = gauss_area(robustness_curve(g, degree_order(g)))
        if k == 3:
            best, _ = oracle.exact_robustness(g)
        else:
            central_first = [k] + list(range(k))
            best = gauss_area(robustness_curve(g, central_first))
        ok &= worst == (k ** 3 + k ** 2) // 2 and best == k * k + k
        ok &= Fraction(worst, best) == Fraction(k, 2)
        details.append(f"k={k}: {worst}/{best}")
    verdict(4, "tree gadget areas and ratio k/2", ok, ", ".join(details))


def t4_instances(max_n=14, max_m=12):
    """Worst-case gadget sizes where the dense block is strictly higher degree
    (at least two block tasks) and no smaller than the dyad side."""
    thresholds = [Fraction(1, 5), Fraction(1, 4), Fraction(1, 3), Fraction(2, 5), Fraction(1, 2),
                  Fraction(2, 3), Fraction(3, 4)]
    out = []
    for n in range(3, max_n + 1):
        for m in range(2, max_m + 1):
            for t in thresholds:
                tm = t * m
                if tm.denominator != 1:
                    continue
                p1 = int(tm) + 1
                if m - p1 >= 2 and n - p1 >= p1:
                    out.append((n, m, Threshold(t.numerator, t.denominator)))
    return out


def test_05_worst_case_gap():
    instances = t4_instances()
    bad = []
    for n, m, t in instances:
        g = gen.t4_worstcase(n, m, t)
        p1, p2 = gen.t4_partition(n, m, t)
        heuristic = mcs_percolation(g, t, degree_order(g))
        exact, witness = oracle.exact_mcs(g, t)
        if not (heuristic >= len(p2) and exact == len(p1) and witness == p1):
            bad.append((n, m, str(t)))
    verdict(5, "worst-case gadget: degree MCS >= |P2|, exact MCS = |P1| with witness P1",
            bool(instances) and not bad, f"{len(instances) - len(bad)}/{len(instances)} instances")


def test_06_oracle_dominance():
    rng = random.Random(77)
    bad = 0
    for _ in range(100):
        g = random_graph(rng, 8, 8, cover_tasks=True)
        order = degree_order(g)
        exact_mcs, _ = oracle.exact_mcs(g, HALF)
        exact_area, _ = oracle.exact_robustness(g)
        size, redundant = mrs_greedy(g, HALF)
        covered = g.m - isolated_task_count(g, redundant)
        ok = (mcs_percolation(g, HALF, order) >= exact_mcs
              and gauss_area(robustness_curve(g, order)) >= exact_area
              and HALF.reached_by(covered, g.m)
              and size <= oracle.exact_z(g, HALF, "max"))
        bad += not ok
    verdict(6, "heuristics never beat the oracle; greedy cover valid", bad == 0,
            f"{100 - bad}/100 graphs")


def _all_fixtures():
    out = [gen.fig1_toy()]
    out += [gen.t5_tree(k) for k in range(2, 6)]
    out += [gen.t4_worstcase(n, m, t) for n, m, t in t4_instances(10, 8)]
    out.append(gen.incidence(3, [(0, 1), (1, 2), (0, 2)]))
    out.append(gen.incidence(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]))
    return out


def test_07_union_find_vs_bfs():
    rng = random.Random(4242)
    graphs = [random_graph(rng, 50, 50, p=rng.uniform(0.01, 0.15)) for _ in range(100)]
    graphs += _all_fixtures()
    bad = 0
    for i, g in enumerate(graphs):
        for order in (degree_order(g), random_order(g, i)):
            curve = robustness_curve(g, order)
            prefix = tuple(tau(g, set(order.order[:j])) for j in range(g.n + 1))
            bad += curve.tau_values != prefix
    verdict(7, "union-find curve equals BFS prefix recomputation", bad == 0,
            f"{2 * len(graphs) - bad}/{2 * len(graphs)} curves")


@pytest.mark.slow
def test_08_strategy_comparison():
    rows = ex.run_strategy_comparison(750, 1000, 50, 0)
    mean = {s: {f: np.mean([getattr(r, f) for r in rows if r.strategy == s])
                for f in ("mrs", "mcs", "gauss_area")} for s in ("degree", "random")}
    d, r = mean["degree"], mean["random"]
    ok = d["mcs"] < r["mcs"] and d["gauss_area"] < r["gauss_area"] and d["mrs"] > r["mrs"]
    verdict(8, "degree order beats random order (50 replicas)", ok,
            f"MCS {d['mcs']:.1f} vs {r['mcs']:.1f}, area {d['gauss_area']:.0f} vs "
            f"{r['gauss_area']:.0f}, MRS {d['mrs']:.1f} vs {r['mrs']:.1f}")


@pytest.mark.slow
def test_09_sensitivity_trends():
    g = gen.power_law_graph(ex.DESK_PEOPLE, ex.DESK_TASKS, 0)

    add = ex.run_density_sweep(g, 100, 5000, "add", 0)
    levels = [row.perturbation_level for row in add]
    rho_mcs = ex.spearman(levels, [row.mcs for row in add])
    rho_rob = ex.spearman(levels, [row.robustness_trapezoid for row in add])
    q1 = rho_mcs > 0.9 and rho_rob > 0.9

    single = ex.run_redundancy_sweep(g, "singletons", 100, 2000, 0)
    mrs = [row.mrs for row in single]
    mcs = [row.mcs for row in single]
    rob = [row.robustness_trapezoid for row in single]
    pe = [row.people_equivalent for row in single]
    drift = (max(pe) - min(pe)) / pe[0]
    q2 = (all(b > a for a, b in zip(mrs, mrs[1:])) and all(b > a for a, b in zip(mcs, mcs[1:]))
          and all(b < a for a, b in zip(rob, rob[1:])) and drift < 0.10)

    seq = gen.power_law_degrees(ex.DESK_PEOPLE, ex.DESK_TASKS, 0)
    rows = ex.run_assortativity_sweep(seq, gen.j_grid(), 10, 0)
    mean_r = ex.group_means(rows, "perturbation_level", "r")
    mean_rob = ex.group_means(rows, "perturbation_level", "robustness_trapezoid")
    keys = sorted(mean_r)
    rho_r = ex.spearman([mean_r[k] for k in keys], [mean_rob[k] for k in keys])
    q3 = len(keys) == 17 and rho_r > 0.9

    verdict(9, "sensitivity trends Q1/Q2/Q3", q1 and q2 and q3,
            f"Q1 rho(MCS)={rho_mcs:.3f} rho(rob)={rho_rob:.3f}; Q2 monotone={q2} "
            f"drift={drift:.3%}; Q3 rho(r, rob)={rho_r:.3f}")


@pytest.mark.slow
def test_10_linear_scaling():
    rows = ex.run_scaling_bench([10 ** 5, 10 ** 6], 0, repeats=3)
    ms = {(row.experiment_id, row.edges): row.runtime_ms for row in rows}
    ratio_mcs = ms[("scaling-mcs", 10 ** 6)] / ms[("scaling-mcs", 10 ** 5)]
    ratio_rob = ms[("scaling-robustness", 10 ** 6)] / ms[("scaling-robustness", 10 ** 5)]
    verdict(10, "MCS and robustness runtime ratio <= 2x edge ratio", ratio_mcs <= 20 and ratio_rob <= 20,
            f"MCS x{ratio_mcs:.1f}, robustness x{ratio_rob:.1f} for x10 edges")


def test_11_metropolis_invariants():
    graphs = [gen.power_law_graph(120, 150, s) for s in range(3)] + [gen.fig1_toy(), gen.t5_tree(4)]
    preserved = True
    zero_ok = True
    runs = 0
    for i, g in enumerate(graphs):
        for J in (-0.05, 0.0, 0.002, 0.05):
            out, stats = gen.rewire(g, gen.RewiringConfig(J, 5, i))
            runs += 1
            preserved &= (out.person_degrees() == g.person_degrees()
                          and out.task_degrees() == g.task_degrees()
                          and out.edge_count == g.edge_count)
            if J == 0.0:
                zero_ok &= stats.accepted == stats.valid > 0
    verdict(11, "rewiring preserves degrees; J=0 accepts every valid swap", preserved and zero_ok,
            f"{runs} runs")
