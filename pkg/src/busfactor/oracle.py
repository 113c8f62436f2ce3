"""Exhaustive reference solvers for small graphs.

Nothing here shares code with the heuristics in :mod:`busfactor.measures`;
isolation is evaluated with person bitmasks and connectivity with the BFS
in :func:`busfactor.graph.connected_components`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .graph import BipartiteGraph, Threshold, tau
from .strategies import RemovalOrder


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_people_subsets: int = 16
    max_people_perms: int = 8

    def __post_init__(self):
        if self.max_people_perms > self.max_people_subsets:
            raise ValueError("permutation cap must not exceed subset cap")


DEFAULT_LIMITS = OracleLimits()


def _check_subsets(g, limits):
    if g.n > limits.max_people_subsets:
        raise OracleCapExceeded(
            f"subset cap {limits.max_people_subsets} exceeded (graph has {g.n} people)")


def _phi_table(g: BipartiteGraph) -> list[int]:
    """``table[mask]`` = isolated tasks after removing the people in ``mask``."""
    task_masks = [sum(1 << p for p in ps) for ps in g.task_adj]
    return [sum(1 for tm in task_masks if tm & mask == tm) for mask in range(1 << g.n)]


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _masks_of_size(n: int, k: int):
    # lexicographic over sorted index tuples
    for combo in itertools.combinations(range(n), k):
        yield sum(1 << i for i in combo), combo


def exact_cov(g: BipartiteGraph, k: int, agg: str, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Min or max number of covered tasks over all removals of exactly ``k`` people."""
    _check_subsets(g, limits)
    if not 0 <= k <= g.n:
        raise ValueError(f"k={k} outside [0, {g.n}]")
    pick = {"min": min, "max": max}[agg]
    phi = _phi_table(g)
    return pick(g.m - phi[mask] for mask, _ in _masks_of_size(g.n, k))


def exact_z(g: BipartiteGraph, t: Threshold, agg: str, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Largest ``k`` whose min/max coverage after ``k`` removals is ``>= t*m``; 0 if none."""
    _check_subsets(g, limits)
    t = Threshold.parse(t)
    pick = {"min": min, "max": max}[agg]
    phi = _phi_table(g)
    best = 0
    for k in range(g.n + 1):
        cov = pick(g.m - phi[mask] for mask, _ in _masks_of_size(g.n, k))
        if t.reached_by(cov, g.m):
            best = k
    return best


def exact_mcs(g: BipartiteGraph, t: Threshold, limits: OracleLimits = DEFAULT_LIMITS):
    """Smallest set whose removal isolates more than ``t*m`` tasks.

    Returns ``(size, witness)``; the witness is the lexicographically least
    optimal set.
    """
    _check_subsets(g, limits)
    t = Threshold.parse(t)
    if t.num == t.den:
        raise ValueError("critical-set threshold must be < 1")
    phi = _phi_table(g)
    for k in range(g.n + 1):
        for mask, combo in _masks_of_size(g.n, k):
            if t.exceeded_by(phi[mask], g.m):
                return k, frozenset(combo)
    raise ValueError(f"no removal isolates more than {t}*{g.m} tasks")


def exact_mrs(g: BipartiteGraph, t: Threshold, limits: OracleLimits = DEFAULT_LIMITS):
    """Largest set whose removal leaves strictly fewer than ``t*m`` isolated tasks.

    Returns ``(size, witness)`` with the lexicographically least witness.
    """
    _check_subsets(g, limits)
    t = Threshold.parse(t)
    phi = _phi_table(g)
    for k in range(g.n, -1, -1):
        for mask, combo in _masks_of_size(g.n, k):
            if phi[mask] * t.den < t.num * g.m:
                return k, frozenset(combo)
    raise ValueError(f"even removing nobody leaves {phi[0]} isolated tasks, not < {t}*{g.m}")


def mrs_threshold_for_coverage(g: BipartiteGraph, t: Threshold) -> Threshold:
    """Threshold ``t'`` such that ``isolated < t'*m`` iff ``covered >= t*m``.

    Links :func:`exact_z` with ``agg="max"`` to :func:`exact_mrs`.
    """
    t = Threshold.parse(t)
    return Threshold(g.m - t.ceil_of(g.m) + 1, g.m)


def exact_robustness(g: BipartiteGraph, limits: OracleLimits = DEFAULT_LIMITS):
    """Minimum Gauss area over every full removal order.

    Returns ``(area, witness)`` where the witness is the lexicographically
    first optimal permutation. ``tau`` of each removed set is computed by
    BFS and memoised, so cost is dominated by the ``n!`` enumeration.
    """
    if g.n > limits.max_people_perms:
        raise OracleCapExceeded(
            f"permutation cap {limits.max_people_perms} exceeded (graph has {g.n} people)")

    @lru_cache(maxsize=None)
    def tau_of(mask: int) -> int:
        return tau(g, _mask_to_set(mask))

    best_area, best_perm = None, tuple(range(g.n))
    for perm in itertools.permutations(range(g.n)):
        area = 0
        mask = 0
        for p in perm:
            mask |= 1 << p
            area += tau_of(mask)
            if best_area is not None and area >= best_area:
                break
        else:
            if best_area is None or area < best_area:
                best_area, best_perm = area, perm
    return (best_area or 0), RemovalOrder(best_perm, "exact")


def proposition1(g: BipartiteGraph, t: Threshold, limits: OracleLimits = DEFAULT_LIMITS) -> dict:
    """Evaluate both sides of ``Z_min,t = MCS_{1-t} - 1``."""
    t = Threshold.parse(t)
    z = exact_z(g, t, "min", limits)
    mcs, _ = exact_mcs(g, t.complement(), limits)
    return {"z_min": z, "mcs_complement": mcs, "holds": z == mcs - 1}
