"""Removal orders over people.

Every strategy returns a full permutation of ``range(g.n)``. Ties are
always broken by ascending person index.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import BipartiteGraph

STRATEGIES = ("degree", "random", "betweenness", "eigenvector", "degree-adaptive")

# centrality scores are rounded before ranking so that float noise in
# accumulation order cannot break an exact tie
_SCORE_DIGITS = 9


@dataclass(frozen=True)
class RemovalOrder:
    order: tuple
    strategy_name: str
    seed: int | None = None

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("removal order must be a permutation of range(n)")

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


def _rank_descending(scores, name, seed=None) -> RemovalOrder:
    order = sorted(range(len(scores)), key=lambda p: (-scores[p], p))
    return RemovalOrder(tuple(order), name, seed)


def degree_order(g: BipartiteGraph) -> RemovalOrder:
    return _rank_descending(g.person_degrees(), "degree")


def random_order(g: BipartiteGraph, seed: int) -> RemovalOrder:
    order = list(range(g.n))
    random.Random(seed).shuffle(order)
    return RemovalOrder(tuple(order), "random", seed)


def betweenness_scores(g: BipartiteGraph) -> list[float]:
    """Unnormalised shortest-path betweenness of every vertex (Brandes).

    Vertices ``0..n-1`` are people, ``n..n+m-1`` tasks. Each unordered
    pair is counted twice, as with a directed sweep over all sources.
    """
    n, m = g.n, g.m
    size = n + m
    adj = [[n + t for t in ts] for ts in g.person_adj]
    adj += [list(ps) for ps in g.task_adj]
    cb = [0.0] * size
    for s in range(size):
        stack = []
        preds = [[] for _ in range(size)]
        sigma = [0] * size
        dist = [-1] * size
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * size
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    return cb


def betweenness_order(g: BipartiteGraph) -> RemovalOrder:
    scores = betweenness_scores(g)[: g.n]
    return _rank_descending([round(x, _SCORE_DIGITS) for x in scores], "betweenness")


def eigenvector_scores(g: BipartiteGraph, tol: float = 1e-10, max_iter: int = 10_000) -> np.ndarray:
    """Dominant eigenvector of the (n+m)-vertex adjacency matrix.

    The bipartite spectrum is symmetric (``-lambda`` is always an
    eigenvalue too), so plain power iteration on ``A`` oscillates. We
    iterate with ``A + I``, which has the same eigenvectors and a strictly
    dominant top eigenvalue.
    """
    if g.edge_count == 0:
        raise ValueError("eigenvector centrality needs at least one edge")
    n, m = g.n, g.m
    ps = np.fromiter((p for p, ts in enumerate(g.person_adj) for _ in ts), dtype=np.int64,
                     count=g.edge_count)
    ts = np.fromiter((t for ts_ in g.person_adj for t in ts_), dtype=np.int64,
                     count=g.edge_count)
    x = np.full(n + m, 1.0 / np.sqrt(n + m))
    residual = np.inf
    for _ in range(max_iter):
        y = x.copy()
        np.add.at(y, ps, x[n + ts])
        np.add.at(y, n + ts, x[ps])
        y /= np.linalg.norm(y)
        residual = float(np.linalg.norm(y - x))
        x = y
        if residual < tol:
            return x
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations", residual)


def eigenvector_order(g: BipartiteGraph) -> RemovalOrder:
    scores = eigenvector_scores(g)[: g.n]
    return _rank_descending([round(float(x), _SCORE_DIGITS) for x in scores], "eigenvector")


def degree_adaptive_order(g: BipartiteGraph) -> RemovalOrder:
    """Greedy adaptive variant: repeatedly remove the person sharing the most
    tasks with someone still present.

    Removing a person never changes another person's plain degree, so the
    adaptive score counts only tasks whose surviving degree is at least 2.
    """
    task_deg = g.task_degrees()
    score = [sum(1 for t in ts if task_deg[t] >= 2) for ts in g.person_adj]
    heap = [(-s, p) for p, s in enumerate(score)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    while heap:
        neg, p = heapq.heappop(heap)
        if removed[p] or -neg != score[p]:
            continue
        removed[p] = True
        order.append(p)
        for t in g.person_adj[p]:
            task_deg[t] -= 1
            if task_deg[t] == 1:
                # the last holder of t no longer shares it
                for q in g.task_adj[t]:
                    if not removed[q]:
                        score[q] -= 1
                        heapq.heappush(heap, (-score[q], q))
    return RemovalOrder(tuple(order), "degree-adaptive")


def removal_order(g: BipartiteGraph, strategy: str, seed: int = 0) -> RemovalOrder:
    """Dispatch on a strategy name from :data:`STRATEGIES`."""
    if strategy == "degree":
        return degree_order(g)
    if strategy == "random":
        return random_order(g, seed)
    if strategy == "betweenness":
        return betweenness_order(g)
    if strategy == "eigenvector":
        return eigenvector_order(g)
    if strategy == "degree-adaptive":
        return degree_adaptive_order(g)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
