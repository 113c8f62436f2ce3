"""Bipartite person/task graph and the coverage/connectivity queries on it."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph input."""


@dataclass(frozen=True)
class Threshold:
    """Exact rational threshold ``num/den`` in (0, 1].

    All comparisons against task counts are done by integer
    cross-multiplication so that e.g. ``1/2`` of an odd ``m`` is never
    rounded.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.num < 1 or self.den < 1 or self.num > self.den:
            raise ValueError(f"threshold must lie in (0, 1], got {self.num}/{self.den}")
        g = math.gcd(self.num, self.den)
        if g != 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)

    @classmethod
    def parse(cls, text) -> "Threshold":
        """Accept ``"1/2"``, ``"0.5"``, a ``Fraction`` or another threshold.

        Decimal strings become a power-of-ten rational, so ``"0.3"`` is
        exactly ``3/10``.
        """
        if isinstance(text, Threshold):
            return text
        if isinstance(text, float):
            raise TypeError("pass thresholds as strings or Fractions, not floats")
        try:
            frac = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse threshold {text!r}") from exc
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def complement(self) -> "Threshold":
        """Return ``1 - t``; only valid for ``t < 1``."""
        return Threshold(self.den - self.num, self.den)

    # k > t*m  <=>  k*den > num*m
    def exceeded_by(self, count: int, total: int) -> bool:
        return count * self.den > self.num * total

    def reached_by(self, count: int, total: int) -> bool:
        return count * self.den >= self.num * total

    def ceil_of(self, total: int) -> int:
        """Smallest integer ``k`` with ``k >= t*total``."""
        return -((-self.num * total) // self.den)

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __float__(self):
        return self.num / self.den


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph between ``n`` people and ``m`` tasks.

    Adjacency is stored twice (per person and per task) as sorted tuples.
    Use :func:`build_graph` rather than constructing this directly.
    """

    n: int
    m: int
    person_adj: tuple
    task_adj: tuple
    edge_count: int
    person_ids: tuple = field(default=None, compare=False, repr=False)
    task_ids: tuple = field(default=None, compare=False, repr=False)

    def person_degree(self, p: int) -> int:
        return len(self.person_adj[p])

    def task_degree(self, t: int) -> int:
        return len(self.task_adj[t])

    def person_degrees(self) -> list[int]:
        return [len(a) for a in self.person_adj]

    def task_degrees(self) -> list[int]:
        return [len(a) for a in self.task_adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, t) for p, ts in enumerate(self.person_adj) for t in ts]

    def has_edge(self, p: int, t: int) -> bool:
        adj = self.person_adj[p]
        i = _bisect(adj, t)
        return i < len(adj) and adj[i] == t

    def person_label(self, p: int) -> str:
        return self.person_ids[p] if self.person_ids else f"p{p + 1}"

    def task_label(self, t: int) -> str:
        return self.task_ids[t] if self.task_ids else f"t{t + 1}"

    def with_labels(self, person_ids=None, task_ids=None) -> "BipartiteGraph":
        return BipartiteGraph(
            self.n,
            self.m,
            self.person_adj,
            self.task_adj,
            self.edge_count,
            tuple(person_ids) if person_ids is not None else self.person_ids,
            tuple(task_ids) if task_ids is not None else self.task_ids,
        )

    def __repr__(self):
        return f"BipartiteGraph(n={self.n}, m={self.m}, edges={self.edge_count})"


def _bisect(seq, x):
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def build_graph(edges: Iterable[tuple[int, int]], n: int, m: int, *, person_ids=None,
                task_ids=None) -> BipartiteGraph:
    """Build a graph from ``(person, task)`` index pairs.

    Duplicate pairs collapse to a single edge. Indices must lie in
    ``[0, n)`` and ``[0, m)``; an out-of-range pair raises
    :class:`GraphError` naming the pair.
    """
    if n < 0 or m < 0:
        raise GraphError(f"negative vertex counts n={n}, m={m}")
    if isinstance(edges, np.ndarray):
        arr = edges.astype(np.int64, copy=False).reshape(-1, 2)
    else:
        arr = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
    if len(arr):
        bad = (arr[:, 0] < 0) | (arr[:, 0] >= n) | (arr[:, 1] < 0) | (arr[:, 1] >= m)
        if bad.any():
            p, t = arr[np.argmax(bad)]
            raise GraphError(f"edge ({int(p)}, {int(t)}) out of range for n={n}, m={m}")
        keys = np.unique(arr[:, 0] * m + arr[:, 1])
        ps, ts = np.divmod(keys, m)
    else:
        ps = ts = np.zeros(0, dtype=np.int64)

    # keys are sorted by (person, task), so per-person slices are sorted
    p_bounds = np.searchsorted(ps, np.arange(n + 1))
    t_list = ts.tolist()
    person_adj = tuple(tuple(t_list[p_bounds[i]:p_bounds[i + 1]]) for i in range(n))

    order = np.lexsort((ps, ts))
    ts_sorted = ts[order]
    ps_by_task = ps[order].tolist()
    t_bounds = np.searchsorted(ts_sorted, np.arange(m + 1))
    task_adj = tuple(tuple(ps_by_task[t_bounds[j]:t_bounds[j + 1]]) for j in range(m))

    if person_ids is not None and len(person_ids) != n:
        raise GraphError("person_ids length does not match n")
    if task_ids is not None and len(task_ids) != m:
        raise GraphError("task_ids length does not match m")
    return BipartiteGraph(
        n, m, person_adj, task_adj, len(t_list),
        tuple(person_ids) if person_ids is not None else None,
        tuple(task_ids) if task_ids is not None else None,
    )


@dataclass(frozen=True)
class RemovalMask:
    """A set of removed people."""

    removed: frozenset

    @classmethod
    def of(cls, g: BipartiteGraph, people: Iterable[int] = ()) -> "RemovalMask":
        removed = frozenset(people)
        for p in removed:
            if not 0 <= p < g.n:
                raise GraphError(f"person {p} out of range for n={g.n}")
        return cls(removed)

    @property
    def removed_count(self) -> int:
        return len(self.removed)

    def __contains__(self, p):
        return p in self.removed


def _removed_set(mask) -> frozenset | set:
    if mask is None:
        return frozenset()
    if isinstance(mask, RemovalMask):
        return mask.removed
    if isinstance(mask, (set, frozenset)):
        return mask
    return frozenset(mask)


def isolated_task_count(g: BipartiteGraph, mask=None) -> int:
    """Number of tasks whose every contributor is in ``mask``."""
    removed = _removed_set(mask)
    if not removed:
        return sum(1 for ps in g.task_adj if not ps)
    return sum(1 for ps in g.task_adj if all(p in removed for p in ps))


@dataclass
class Components:
    """Connected components of the graph left after a removal."""

    components: list  # list of (frozenset people, frozenset tasks)
    orphaned_tasks: list

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def connected_components(g: BipartiteGraph, mask=None) -> Components:
    """Components of ``G[P \\ mask]`` that contain at least one person.

    Tasks without a surviving neighbour are returned separately as
    ``orphaned_tasks``. Plain BFS; this is the reference the union-find
    curve is checked against.
    """
    removed = _removed_set(mask)
    seen_p = [False] * g.n
    seen_t = [False] * g.m
    comps = []
    for start in range(g.n):
        if seen_p[start] or start in removed:
            continue
        seen_p[start] = True
        people, tasks = [start], []
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for t in g.person_adj[p]:
                if seen_t[t]:
                    continue
                seen_t[t] = True
                tasks.append(t)
                for q in g.task_adj[t]:
                    if not seen_p[q] and q not in removed:
                        seen_p[q] = True
                        people.append(q)
                        queue.append(q)
        comps.append((frozenset(people), frozenset(tasks)))
    orphaned = [t for t in range(g.m) if not seen_t[t]]
    return Components(comps, orphaned)


def tau(g: BipartiteGraph, mask=None) -> int:
    """Largest number of tasks in one component holding a surviving person.

    Tasks with no surviving neighbour count for nothing, so the value is 0
    once every person is removed.
    """
    return max((len(ts) for _, ts in connected_components(g, mask)), default=0)


def filter_by_weight(edges: Iterable[tuple], min_weight: float) -> list[tuple]:
    """Keep ``(person, task, weight)`` triples with ``weight >= min_weight``.

    Returns bare ``(person, task)`` pairs.
    """
    return [(p, t) for p, t, w in edges if w >= min_weight]


# -- TSV edge lists ----------------------------------------------------------

class EdgeListParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class WeightedEdgeList:
    """Edge list with interned string IDs, as read from a TSV file."""

    person_ids: list[str]
    task_ids: list[str]
    edges: list[tuple[int, int, float]]

    def to_graph(self, min_weight: float = 0.0) -> BipartiteGraph:
        """Apply the weight filter and build the graph.

        People and tasks whose edges are all filtered out stay in the
        graph with degree 0.
        """
        kept = filter_by_weight(self.edges, min_weight)
        return build_graph(kept, len(self.person_ids), len(self.task_ids),
                           person_ids=self.person_ids, task_ids=self.task_ids)


def parse_edge_list(lines: Iterable[str]) -> WeightedEdgeList:
    """Parse ``person<TAB>task[<TAB>weight]`` lines; ``#`` starts a comment."""
    person_index: dict[str, int] = {}
    task_index: dict[str, int] = {}
    edges = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise EdgeListParseError(f"expected 2 or 3 tab-separated fields, got {len(parts)}",
                                     lineno)
        pid, tid = parts[0].strip(), parts[1].strip()
        if not pid or not tid:
            raise EdgeListParseError("empty person or task id", lineno)
        weight = 1.0
        if len(parts) == 3:
            try:
                weight = float(parts[2])
            except ValueError:
                raise EdgeListParseError(f"bad weight {parts[2]!r}", lineno) from None
            if not math.isfinite(weight):
                raise EdgeListParseError(f"non-finite weight {parts[2]!r}", lineno)
        p = person_index.setdefault(pid, len(person_index))
        t = task_index.setdefault(tid, len(task_index))
        edges.append((p, t, weight))
    return WeightedEdgeList(list(person_index), list(task_index), edges)


def read_edge_list(path) -> WeightedEdgeList:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: BipartiteGraph) -> str:
    return "".join(f"{g.person_label(p)}\t{g.task_label(t)}\n" for p, t in g.edges())


def graph_from_adjacency(person_adj: Sequence[Iterable[int]], m: int) -> BipartiteGraph:
    """Convenience constructor from per-person task lists."""
    edges = [(p, t) for p, ts in enumerate(person_adj) for t in ts]
    return build_graph(edges, len(person_adj), m)
