import random

import pytest
from hypothesis import strategies as st

from busfactor.generators import fig1_toy
from busfactor.graph import build_graph


def random_graph(rng: random.Random, max_n: int, max_m: int, p: float | None = None,
                 cover_tasks: bool = False):
    """Small random bipartite graph; with ``cover_tasks`` every task gets degree >= 1."""
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    p = rng.uniform(0.15, 0.7) if p is None else p
    edges = [(i, j) for i in range(n) for j in range(m) if rng.random() < p]
    if cover_tasks:
        for j in range(m):
            edges.append((rng.randrange(n), j))
    return build_graph(edges, n, m)


@st.composite
def bipartite_graphs(draw, max_n=7, max_m=7, min_n=1, min_m=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(min_m, max_m))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, m - 1)), max_size=n * m))
    return build_graph(edges, n, m)


@st.composite
def covered_graphs(draw, max_n=7, max_m=7):
    """Graphs in which no task starts out isolated."""
    g = draw(bipartite_graphs(max_n, max_m))
    extra = [(draw(st.integers(0, g.n - 1)), j) for j in range(g.m) if not g.task_adj[j]]
    return build_graph(list(g.edges()) + extra, g.n, g.m)


def dyad():
    return build_graph([(0, 0)], 1, 1)


def two_dyads():
    return build_graph([(0, 0), (1, 1)], 2, 2)


def path4():
    # p1 - t1 - p2 - t2
    return build_graph([(0, 0), (1, 0), (1, 1)], 2, 2)


def complete(n, m):
    return build_graph([(i, j) for i in range(n) for j in range(m)], n, m)


def three_cover():
    # neighbourhoods {t1,t2}, {t2,t3}, {t3,t4}
    return build_graph([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3)], 3, 4)


@pytest.fixture
def fig1():
    return fig1_toy()


# one line per acceptance criterion, repeated in the terminal summary so the
# verdicts show up even when output capture is on
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[0].split("[")[1])):
            terminalreporter.write_line(line)
