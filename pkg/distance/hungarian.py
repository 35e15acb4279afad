# distance/hungarian.py
"""
Kuhn-Munkres minimum-cost assignment on a square cost matrix.

Shortest augmenting path with row/column potentials, O(n^3). Row i is
added one at a time; `minv` holds the reduced-cost frontier per column and
`way` the predecessor column used to walk the augmenting path back.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True)
class Assignment:
    mapping: Tuple[Tuple[int, int], ...]    # (row, column), sorted by row
    total_cost: float

    def columns(self) -> List[int]:
        return [col for _, col in self.mapping]


def hungarian(cost) -> Assignment:
    """
    Optimal one-to-one assignment of rows to columns.

    Args:
        cost: square array-like of real costs

    Returns:
        Assignment with `total_cost` summed over the mapped cells in row order
    """
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    n = c.shape[0]
    if n == 0:
        return Assignment((), 0.0)

    # 1-based potentials; column 0 is the virtual start column
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=int)      # p[j] = row matched to column j (0 = none)
    way = np.zeros(n + 1, dtype=int)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used[1:]
            reduced = c[i0 - 1] - u[i0] - v[1:]
            improve = free & (reduced < minv[1:])
            minv[1:][improve] = reduced[improve]
            way[1:][improve] = j0

            candidates = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(candidates)) + 1
            delta = candidates[j1 - 1]

            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta

            j0 = j1
            if p[j0] == 0:
                break

        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    row_to_col = [0] * n
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    mapping = tuple((row, col) for row, col in enumerate(row_to_col))

    total = 0.0
    for row, col in mapping:
        total += float(c[row, col])
    return Assignment(mapping, total)


__all__ = ["Assignment", "hungarian"]
