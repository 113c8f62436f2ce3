"""Bus-factor measures: redundant set, critical set and robustness curve."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .graph import BipartiteGraph, Threshold
from .strategies import RemovalOrder, removal_order

SCHEMA_VERSION = 1


class InfeasibleThreshold(ValueError):
    """The requested threshold cannot be met on this graph."""


# -- Maximum Redundant Set ---------------------------------------------------

def mrs_greedy(g: BipartiteGraph, t: Threshold) -> tuple[int, frozenset]:
    """Lazy-greedy partial set cover; returns the complement as the MRS.

    People are popped from a max-heap keyed on how many still-uncovered
    tasks they hold. A popped entry whose key is stale is refreshed and
    pushed back instead of being taken. The loop stops once at least
    ``t*m`` tasks are covered.

    Returns ``(n - |S|, P \\ S)``.
    """
    t = Threshold.parse(t)
    coverable = sum(1 for ps in g.task_adj if ps)
    if not t.reached_by(coverable, g.m):
        raise InfeasibleThreshold(
            f"coverage target {t}*{g.m} unreachable: at most {coverable} of {g.m} tasks coverable")

    covered = bytearray(g.m)
    n_covered = 0
    remaining = [g.person_adj[p] for p in range(g.n)]
    heap = [(-len(ts), p) for p, ts in enumerate(remaining)]
    heapq.heapify(heap)
    cover = set()
    while not t.reached_by(n_covered, g.m):
        neg, p = heapq.heappop(heap)
        effective = [x for x in remaining[p] if not covered[x]]
        if len(effective) == -neg:
            cover.add(p)
            for x in effective:
                covered[x] = 1
            n_covered += len(effective)
        else:
            remaining[p] = effective
            heapq.heappush(heap, (-len(effective), p))
    redundant = frozenset(range(g.n)) - cover
    return len(redundant), redundant


def mrs_in_order(g: BipartiteGraph, t: Threshold, order: Sequence[int]) -> tuple[int, frozenset]:
    """Non-adaptive MRS baseline: take people into the cover in a fixed
    processing order until ``t*m`` tasks are covered."""
    t = Threshold.parse(t)
    covered = bytearray(g.m)
    n_covered = 0
    cover = set()
    for p in order:
        if t.reached_by(n_covered, g.m):
            break
        cover.add(p)
        for x in g.person_adj[p]:
            if not covered[x]:
                covered[x] = 1
                n_covered += 1
    if not t.reached_by(n_covered, g.m):
        raise InfeasibleThreshold(
            f"coverage target {t}*{g.m} unreachable: at most {n_covered} of {g.m} tasks coverable")
    redundant = frozenset(range(g.n)) - cover
    return len(redundant), redundant


# -- Minimum Critical Set ----------------------------------------------------

def mcs_percolation(g: BipartiteGraph, t: Threshold, order: Sequence[int]) -> int:
    """Remove people along ``order`` until more than ``t*m`` tasks are
    isolated; return how many were removed."""
    t = Threshold.parse(t)
    if t.num == t.den:
        raise InfeasibleThreshold("critical-set threshold must be < 1")
    task_deg = [len(ps) for ps in g.task_adj]
    isolated = task_deg.count(0)
    removed = 0
    m, num, den = g.m, t.num, t.den
    adj = g.person_adj
    it = iter(order)
    while isolated * den <= num * m:
        p = next(it, None)
        if p is None:
            raise InfeasibleThreshold(
                f"removal order exhausted with {isolated} of {m} tasks isolated (need > {t}*{m})")
        for x in adj[p]:
            task_deg[x] -= 1
            if task_deg[x] == 0:
                isolated += 1
        removed += 1
    return removed


# -- Robustness --------------------------------------------------------------

@dataclass(frozen=True)
class RobustnessCurve:
    """``tau_values[i]`` is the largest connected task count after the
    first ``i`` removals; ``tau_values[n] == 0``."""

    tau_values: tuple
    order: RemovalOrder | None = None
    m: int = 0

    @property
    def n(self) -> int:
        return len(self.tau_values) - 1


def robustness_curve(g: BipartiteGraph, order: Sequence[int]) -> RobustnessCurve:
    """Decay curve via union-find, adding people back in reverse order.

    Slots ``0..m-1`` hold tasks, ``m..m+n-1`` people. Component size is
    tracked in tasks; only components that have absorbed a person count
    towards the maximum. Linear in the number of edges (up to the inverse
    Ackermann factor).
    """
    n, m = g.n, g.m
    if len(order) != n:
        raise ValueError("robustness curve needs a full removal order")
    parent = list(range(m + n))
    rank = [0] * (m + n)
    tasks = [1] * m + [0] * n
    adj = g.person_adj

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    best = 0
    recorded = []
    for p in reversed(order):
        rp = m + p
        for x in adj[p]:
            rx = find(x)
            if rx == rp:
                continue
            # union by size (task count, with rank breaking empty-side ties)
            if (tasks[rx], rank[rx]) > (tasks[rp], rank[rp]):
                rx, rp = rp, rx
            parent[rx] = rp
            tasks[rp] += tasks[rx]
            if rank[rx] == rank[rp]:
                rank[rp] += 1
        root = find(m + p)
        if tasks[root] > best:
            best = tasks[root]
        recorded.append(best)
    recorded.reverse()
    recorded.append(0)
    if not isinstance(order, RemovalOrder):
        order = RemovalOrder(tuple(order), "custom")
    return RobustnessCurve(tuple(recorded), order, m)


def gauss_area(curve: RobustnessCurve) -> int:
    """Sum of ``tau_values[1..n]``."""
    return sum(curve.tau_values[1:])


def trapezoid_area2(curve: RobustnessCurve) -> int:
    """Twice the trapezoid-rule area, kept integral."""
    tv = curve.tau_values
    return sum(tv[i - 1] + tv[i] for i in range(1, len(tv)))


def normalized_bus_factor(curve: RobustnessCurve, variant: str = "trapezoid", m: int | None = None) -> float:
    """Area under the curve relative to the complete bipartite graph.

    ``gauss``: ``sum tau[1..n] / (m (n-1))``, defined as 0 for ``n == 1``.
    ``trapezoid``: ``sum (tau[i-1] + tau[i]) / (m (2n-1))``. Both are 1 on
    ``K_{n,m}``.
    """
    m = curve.m if m is None else m
    n = curve.n
    if n < 1 or m < 1:
        raise ValueError(f"normalised bus-factor undefined for n={n}, m={m}")
    if variant == "gauss":
        if n == 1:
            return 0.0
        return gauss_area(curve) / (m * (n - 1))
    if variant == "trapezoid":
        return trapezoid_area2(curve) / (m * (2 * n - 1))
    raise ValueError(f"unknown variant {variant!r}")


# -- Composition -------------------------------------------------------------

@dataclass
class BusFactorReport:
    mrs_size: int
    mrs_set: frozenset
    mcs_size: int
    gauss_area: int
    robustness_gauss: float
    robustness_trapezoid: float
    people_equivalent: float
    people_equivalent_trapezoid: float
    threshold: Threshold
    strategy_name: str
    curve: RobustnessCurve
    n: int = 0
    m: int = 0
    edge_count: int = 0
    warnings: list = field(default_factory=list)

    def to_dict(self, g: BipartiteGraph | None = None) -> dict:
        label = g.person_label if g is not None else (lambda p: p)
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "m": self.m,
            "edges": self.edge_count,
            "threshold": str(self.threshold),
            "strategy": self.strategy_name,
            "mrs_size": self.mrs_size,
            "mrs_set": [label(p) for p in sorted(self.mrs_set)],
            "mcs_size": self.mcs_size,
            "gauss_area": self.gauss_area,
            "robustness_gauss": self.robustness_gauss,
            "robustness_trapezoid": self.robustness_trapezoid,
            "people_equivalent": self.people_equivalent,
            "people_equivalent_trapezoid": self.people_equivalent_trapezoid,
            "curve": list(self.curve.tau_values),
            "order": [label(p) for p in self.curve.order] if self.curve.order else [],
            "warnings": list(self.warnings),
        }


def graph_warnings(g: BipartiteGraph) -> list[str]:
    out = []
    idle = [g.person_label(p) for p in range(g.n) if not g.person_adj[p]]
    if idle:
        out.append(f"{len(idle)} people have degree 0: {', '.join(idle[:10])}"
                   + (" ..." if len(idle) > 10 else ""))
    orphan = [g.task_label(t) for t in range(g.m) if not g.task_adj[t]]
    if orphan:
        out.append(f"{len(orphan)} tasks have degree 0 and are permanently isolated: "
                   + ", ".join(orphan[:10]) + (" ..." if len(orphan) > 10 else ""))
    return out


def analyze(g: BipartiteGraph, t: Threshold | str = "1/2", strategy: str = "degree",
            seed: int = 0) -> BusFactorReport:
    """Run all three measures with one removal strategy."""
    t = Threshold.parse(t)
    order = removal_order(g, strategy, seed)
    mrs_size, mrs_set = mrs_greedy(g, t)
    mcs_size = mcs_percolation(g, t, order)
    curve = robustness_curve(g, order)
    gauss = normalized_bus_factor(curve, "gauss")
    trap = normalized_bus_factor(curve, "trapezoid")
    return BusFactorReport(
        mrs_size=mrs_size,
        mrs_set=mrs_set,
        mcs_size=mcs_size,
        gauss_area=gauss_area(curve),
        robustness_gauss=gauss,
        robustness_trapezoid=trap,
        people_equivalent=gauss * g.n,
        people_equivalent_trapezoid=trap * g.n,
        threshold=t,
        strategy_name=strategy,
        curve=curve,
        n=g.n,
        m=g.m,
        edge_count=g.edge_count,
        warnings=graph_warnings(g),
    )
