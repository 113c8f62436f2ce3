"""Synthetic project graphs: random, power-law configuration model,
Metropolis degree-correlation rewiring, and small fixture gadgets."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import BipartiteGraph, GraphError, Threshold, build_graph


@dataclass(frozen=True)
class PowerLawParams:
    """Density ``alpha/c * ((x-a)/c)**(alpha-1)`` on ``[a, a+c]``."""

    alpha: float
    a: float = 1.0
    c: float = 100.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.a >= 1 and self.c > 0):
            raise ValueError(f"invalid power-law parameters {self}")

    def mean(self) -> float:
        return self.a + self.c * self.alpha / (self.alpha + 1)

    def cdf(self, x):
        z = np.clip((np.asarray(x, dtype=float) - self.a) / self.c, 0.0, 1.0)
        return z ** self.alpha

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = (x - self.a) / self.c
        inside = (z > 0) & (z <= 1)
        out = np.zeros_like(x)
        out[inside] = self.alpha / self.c * z[inside] ** (self.alpha - 1)
        return out


# default people / task parameters for synthetic project networks
PEOPLE_PARAMS = PowerLawParams(0.2, 1.0, 100.0)
TASK_PARAMS = PowerLawParams(0.2, 1.0, 70.0)


def power_law_quantile(params: PowerLawParams, u):
    """Inverse CDF: ``a + c * u**(1/alpha)``."""
    return params.a + params.c * np.asarray(u, dtype=float) ** (1.0 / params.alpha)


def _round_degree(x, params):
    # half-up rounding, never below ceil(a) or 1
    floor = max(1, math.ceil(params.a))
    return np.maximum(np.floor(np.asarray(x) + 0.5).astype(np.int64), floor)


def sample_power_law_degree(params: PowerLawParams, u: float) -> int:
    return int(_round_degree(power_law_quantile(params, u), params))


def sample_power_law_degrees(params: PowerLawParams, size: int, rng: np.random.Generator,
                             cap: int | None = None) -> np.ndarray:
    degs = _round_degree(power_law_quantile(params, rng.random(size)), params)
    if cap is not None:
        degs = np.minimum(degs, cap)
    return degs


@dataclass
class DegreeSequence:
    person_degrees: list
    task_degrees: list

    def __post_init__(self):
        self.person_degrees = [int(d) for d in self.person_degrees]
        self.task_degrees = [int(d) for d in self.task_degrees]

    @property
    def n(self):
        return len(self.person_degrees)

    @property
    def m(self):
        return len(self.task_degrees)

    def validate(self):
        n, m = self.n, self.m
        if not n or not m:
            raise ValueError("degree sequence is empty")
        if any(d < 1 or d > m for d in self.person_degrees):
            raise ValueError("person degrees must lie in [1, m]")
        if any(d < 1 or d > n for d in self.task_degrees):
            raise ValueError("task degrees must lie in [1, n]")


def reconcile(seq: DegreeSequence, rng: np.random.Generator) -> DegreeSequence:
    """Raise degrees on the side with fewer stubs until both totals match.

    Vertices are picked uniformly among those still below the cap (the
    size of the opposite side).
    """
    people = np.array(seq.person_degrees, dtype=np.int64)
    tasks = np.array(seq.task_degrees, dtype=np.int64)
    deficit = int(people.sum() - tasks.sum())
    if deficit:
        side, cap = (tasks, len(people)) if deficit > 0 else (people, len(tasks))
        need = abs(deficit)
        if need > int((cap - side).sum()):
            raise ValueError("degree sums cannot be reconciled within the caps")
        while need:
            open_ = np.flatnonzero(side < cap)
            picks = rng.choice(open_, size=min(need, len(open_)), replace=True)
            for v in picks:
                if side[v] < cap and need:
                    side[v] += 1
                    need -= 1
    return DegreeSequence(people.tolist(), tasks.tolist())


def power_law_degrees(n: int, m: int, seed: int, people: PowerLawParams = PEOPLE_PARAMS,
                      tasks: PowerLawParams = TASK_PARAMS) -> DegreeSequence:
    """Sample and reconcile a person/task degree sequence."""
    rng = np.random.default_rng(seed)
    pd = sample_power_law_degrees(people, n, rng, cap=m)
    td = sample_power_law_degrees(tasks, m, rng, cap=n)
    return reconcile(DegreeSequence(pd, td), rng)


@dataclass
class ConfigurationResult:
    graph: BipartiteGraph
    requested: DegreeSequence
    deviation: int  # stubs lost to multi-edge collapse

    @property
    def realized(self) -> DegreeSequence:
        return DegreeSequence(self.graph.person_degrees(), self.graph.task_degrees())


def configuration_model_result(degrees: DegreeSequence, seed: int) -> ConfigurationResult:
    n, m = degrees.n, degrees.m
    if not n or not m:
        raise ValueError("degree sequence is empty")
    total = sum(degrees.person_degrees)
    if total != sum(degrees.task_degrees):
        raise ValueError("person and task degree sums differ; reconcile first")
    rng = np.random.default_rng(seed)
    p_stubs = np.repeat(np.arange(n), degrees.person_degrees)
    t_stubs = np.repeat(np.arange(m), degrees.task_degrees)
    rng.shuffle(t_stubs)
    g = build_graph(np.column_stack([p_stubs, t_stubs]), n, m)
    return ConfigurationResult(g, degrees, total - g.edge_count)


def configuration_model(degrees: DegreeSequence, seed: int) -> BipartiteGraph:
    """Bipartite stub matching; multi-edges collapse to simple edges."""
    return configuration_model_result(degrees, seed).graph


def power_law_graph(n: int, m: int, seed: int) -> BipartiteGraph:
    return configuration_model(power_law_degrees(n, m, seed), seed)


def random_bipartite(n: int, m: int, num_edges: int, seed: int) -> BipartiteGraph:
    """Uniformly random simple bipartite graph with exactly ``num_edges`` edges."""
    if num_edges > n * m:
        raise ValueError("more edges requested than person-task pairs")
    rng = np.random.default_rng(seed)
    keys = rng.choice(n * m, size=num_edges, replace=False)
    return build_graph(np.column_stack(np.divmod(keys, m)), n, m)


def degree_correlation(g: BipartiteGraph) -> float:
    """Pearson correlation of the degrees at the two ends of each edge.

    Evaluated exactly in integers and divided once at the end.
    """
    if g.edge_count == 0:
        raise ValueError("degree correlation undefined for a graph without edges")
    pdeg = g.person_degrees()
    tdeg = g.task_degrees()
    s_prod = s_sum = s_sq = 0
    for p, ts in enumerate(g.person_adj):
        kp = pdeg[p]
        for t in ts:
            kt = tdeg[t]
            s_prod += kp * kt
            s_sum += kp + kt
            s_sq += kp * kp + kt * kt
    e = g.edge_count
    # scale every term by 4 e^2 to stay integral
    num = 4 * e * s_prod - s_sum * s_sum
    den = 2 * e * s_sq - s_sum * s_sum
    if den == 0:
        raise ValueError("undefined correlation: endpoint degrees have zero variance")
    return num / den


# -- Metropolis rewiring -----------------------------------------------------

@dataclass(frozen=True)
class RewiringConfig:
    J: float = 0.0
    sweep_count: float = 20
    seed: int = 0

    def __post_init__(self):
        if self.sweep_count < 1:
            raise ValueError("sweep_count must be >= 1")


@dataclass
class RewireStats:
    attempts: int = 0
    valid: int = 0
    accepted: int = 0


def rewire(g: BipartiteGraph, config: RewiringConfig) -> tuple[BipartiteGraph, RewireStats]:
    """Degree-preserving double-edge swaps under ``H = -J * sum k_i k_j``.

    Each attempt picks two edges ``(u, z)``, ``(w, v)`` and proposes
    ``(u, v)``, ``(w, z)``. Proposals that would duplicate an edge or
    reuse an endpoint are rejected as invalid; valid ones are accepted
    with probability ``min(1, exp(-dH))``.
    """
    if g.edge_count < 2:
        raise ValueError("rewiring needs at least two edges")
    m = g.m
    pdeg = g.person_degrees()
    tdeg = g.task_degrees()
    ep = []
    et = []
    for p, ts in enumerate(g.person_adj):
        for t in ts:
            ep.append(p)
            et.append(t)
    present = {p * m + t for p, t in zip(ep, et)}
    E = len(ep)
    J = config.J
    rng = random.Random(config.seed)
    rand, randrange, exp = rng.random, rng.randrange, math.exp
    stats = RewireStats()
    attempts = int(round(config.sweep_count * E))
    for _ in range(attempts):
        i = randrange(E)
        j = randrange(E)
        u, z = ep[i], et[i]
        w, v = ep[j], et[j]
        if u == w or z == v:
            continue
        uv, wz = u * m + v, w * m + z
        if uv in present or wz in present:
            continue
        stats.valid += 1
        ku, kw, kz, kv = pdeg[u], pdeg[w], tdeg[z], tdeg[v]
        dH = -J * (ku * kv + kw * kz - ku * kz - kw * kv)
        if dH > 0 and rand() >= exp(-dH):
            continue
        present.discard(u * m + z)
        present.discard(w * m + v)
        present.add(uv)
        present.add(wz)
        et[i], et[j] = v, z
        stats.accepted += 1
    stats.attempts = attempts
    out = build_graph(np.column_stack([ep, et]), g.n, g.m,
                      person_ids=g.person_ids, task_ids=g.task_ids)
    return out, stats


def metropolis_rewire(g: BipartiteGraph, config: RewiringConfig) -> BipartiteGraph:
    return rewire(g, config)[0]


def j_grid(j_min: float = -0.002, j_max: float = 0.002, steps: int = 17) -> list[float]:
    if steps == 1:
        return [j_min]
    return [float(x) for x in np.linspace(j_min, j_max, steps)]


# -- Fixtures ----------------------------------------------------------------

def fig1_toy() -> BipartiteGraph:
    """One integrator on four tasks, plus two dedicated people per task."""
    edges = [(0, t) for t in range(4)]
    for t in range(4):
        edges += [(1 + 2 * t, t), (2 + 2 * t, t)]
    return build_graph(edges, 9, 4)


def t4_worstcase(n: int, m: int, t) -> BipartiteGraph:
    """Dyads plus a complete block on which degree-order MCS does badly.

    People ``0..tm`` are the dyad people (each on its own task among the
    first ``tm+1`` tasks); the remaining ``n-tm-1`` people are fully
    connected to the remaining ``(1-t)m - 1`` tasks. ``t*m`` must be an
    integer.
    """
    t = Threshold.parse(t)
    tm = Fraction(t.num * m, t.den)
    if tm.denominator != 1:
        raise ValueError(f"t*m = {tm} must be an integer")
    tm = int(tm)
    n1 = tm + 1
    t2 = m - n1
    if n <= n1:
        raise ValueError(f"need n > t*m + 1 = {n1}, got n={n}")
    if t2 < 1:
        raise ValueError(f"need (1-t)m - 1 >= 1 tasks in the dense block, got {t2}")
    edges = [(i, i) for i in range(n1)]
    edges += [(p, n1 + j) for p in range(n1, n) for j in range(t2)]
    return build_graph(edges, n, m)


def t4_partition(n: int, m: int, t) -> tuple[frozenset, frozenset]:
    """``(P1, P2)`` for :func:`t4_worstcase`: dyad people and block people."""
    t = Threshold.parse(t)
    n1 = t.num * m // t.den + 1
    return frozenset(range(n1)), frozenset(range(n1, n))


def t5_tree(k: int) -> BipartiteGraph:
    """``k`` stars of ``k+1`` tasks tied together by one central person.

    Peripheral people are ``0..k-1``; the central person is ``k`` and holds
    the first task of every star.
    """
    if k < 2:
        raise ValueError(f"t5_tree needs k >= 2, got {k}")
    edges = []
    for i in range(k):
        base = i * (k + 1)
        edges += [(i, base + j) for j in range(k + 1)]
        edges.append((k, base))
    return build_graph(edges, k + 1, k * (k + 1))


def incidence(num_vertices: int, graph_edges) -> BipartiteGraph:
    """Vertices become people, edges become tasks, incidences become links."""
    edges = []
    seen = set()
    for j, (a, b) in enumerate(graph_edges):
        if a == b:
            raise ValueError("incidence construction needs a simple graph (self-loop found)")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ValueError(f"incidence construction needs a simple graph (duplicate {key})")
        seen.add(key)
        edges += [(a, j), (b, j)]
    return build_graph(edges, num_vertices, len(seen))


FIXTURES = ("fig1_toy", "t4_worstcase", "t5_tree", "incidence")


def fixture(name: str, **params) -> BipartiteGraph:
    if name == "fig1_toy":
        return fig1_toy()
    if name == "t4_worstcase":
        return t4_worstcase(params["n"], params["m"], params["t"])
    if name == "t5_tree":
        return t5_tree(params["k"])
    if name == "incidence":
        return incidence(params["num_vertices"], params["edges"])
    raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
