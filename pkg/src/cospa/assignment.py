"""Minimum-cost injective assignment between the rows and columns of a matrix.

``solve_assignment`` wraps the rectangular shortest-augmenting-path solver from
scipy and then refines the answer so that, among all cost-optimal mappings, the
lexicographically smallest one is returned. Costs are always accumulated with
``math.fsum`` so that the solver and the exhaustive oracle agree bit for bit on
both the winning mapping and its cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

MAX_BRUTE_FORCE_SIZE = 9


@dataclass(frozen=True)
class CostMatrix:
    """A validated ``(m, n)`` cost matrix with ``1 <= m <= n``.

    Entries must be finite and nonnegative. Callers orient the smaller index
    set along the rows before building one.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"cost matrix must be 2-D, got shape {arr.shape}")
        m, n = arr.shape
        if m == 0 or n == 0:
            raise ValueError("cost matrix must not be empty; handle empty sets before the solver")
        if m > n:
            raise ValueError(f"cost matrix must have rows <= cols, got {m} x {n}")
        if not np.isfinite(arr).all():
            raise ValueError("cost matrix entries must be finite")
        if (arr < 0).any():
            raise ValueError("cost matrix entries must be nonnegative")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class Assignment:
    """An injective row-to-column mapping and its summed cost.

    ``mapping[i]`` is the column assigned to row ``i``; columns are pairwise
    distinct. ``cost`` is the fsum of the assigned entries.
    """

    mapping: tuple[int, ...]
    cost: float


def _as_cost_matrix(costs) -> CostMatrix:
    return costs if isinstance(costs, CostMatrix) else CostMatrix(np.asarray(costs, dtype=float))


def _mapping_cost(entries: np.ndarray, mapping) -> float:
    return math.fsum(entries[i, j] for i, j in enumerate(mapping))


def _complete(entries: np.ndarray, prefix: list[int]) -> tuple[float, list[int]]:
    """Cheapest full mapping extending ``prefix``, found by solving the tail."""
    m, n = entries.shape
    k = len(prefix)
    if k == m:
        return _mapping_cost(entries, prefix), list(prefix)
    taken = set(prefix)
    open_cols = [j for j in range(n) if j not in taken]
    sub = entries[k:, open_cols]
    row_ind, col_ind = linear_sum_assignment(sub)
    tail: list[int] = [0] * (m - k)
    for r, s in zip(row_ind, col_ind):
        tail[r] = open_cols[s]
    full = list(prefix) + tail
    return _mapping_cost(entries, full), full


def solve_assignment(costs) -> Assignment:
    """Globally optimal assignment, deterministic under cost ties.

    Args:
        costs: a ``CostMatrix`` or array-like with ``1 <= m <= n``.

    Returns:
        The lexicographically smallest mapping among those of minimal fsum
        cost, together with that cost.
    """
    matrix = _as_cost_matrix(costs)
    entries = matrix.entries
    m = matrix.rows
    target, current = _complete(entries, [])
    mapping: list[int] = []
    for i in range(m):
        taken = set(mapping)
        for j in range(current[i]):
            if j in taken:
                continue
            total, candidate = _complete(entries, mapping + [j])
            if total == target:
                current = candidate
                break
        mapping.append(current[i])
    return Assignment(tuple(mapping), target)


def brute_force_assignment(costs) -> Assignment:
    """Exhaustive oracle for ``solve_assignment`` on small matrices.

    Enumerates every injective mapping in lexicographic order and keeps the
    first one achieving the minimal fsum cost. Guarded to ``n <= 9`` since the
    search is factorial.
    """
    matrix = _as_cost_matrix(costs)
    if matrix.cols > MAX_BRUTE_FORCE_SIZE:
        raise ValueError(f"brute force capped at {MAX_BRUTE_FORCE_SIZE} columns, got {matrix.cols}")
    entries = matrix.entries
    best_mapping: tuple[int, ...] | None = None
    best_cost = math.inf
    for candidate in permutations(range(matrix.cols), matrix.rows):
        cost = _mapping_cost(entries, candidate)
        if cost < best_cost:
            best_cost = cost
            best_mapping = candidate
    assert best_mapping is not None
    return Assignment(best_mapping, best_cost)
