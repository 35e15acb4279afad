# completion/graph.py
"""
Similarity graph over vertices and its sparsification.

Vertices are ordered labelled-first. W[i, j] = similarity(v_i, v_j) off the
diagonal, 0 on it. Sparsification zeroes entries and never changes a kept
value, so W' stays symmetric with a zero diagonal.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from completion.partition import Vertex
from distance.sets import evidence_similarity

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    values:     np.ndarray
    n_labelled: int
    order:      Tuple[Vertex, ...]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def n_unlabelled(self) -> int:
        return self.n - self.n_labelled

    def with_values(self, values: np.ndarray) -> "WeightMatrix":
        return WeightMatrix(values, self.n_labelled, self.order)

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.values, k=1)))


def _similarity_row(evidence: Sequence[FrozenSet], i: int) -> List[float]:
    return [evidence_similarity(evidence[i], evidence[j]) for j in range(i + 1, len(evidence))]


def build_weights(vs: Sequence[Vertex], workers: int = 1) -> WeightMatrix:
    """
    Dense similarity matrix with labelled vertices first.

    Args:
        vs:      vertices in any label order; relative order is kept within each side
        workers: thread count for the row computations (1 = sequential)
    """
    labelled = [v for v in vs if v.label.is_known]
    unlabelled = [v for v in vs if not v.label.is_known]
    order = tuple(labelled + unlabelled)
    n = len(order)

    # vertices with equal evidence share one row of the similarity table
    unique: Dict[FrozenSet, int] = {}
    index = np.array([unique.setdefault(v.evidence, len(unique)) for v in order], dtype=int)
    evidence = list(unique)
    m = len(evidence)

    table = np.eye(m)
    if workers > 1 and m > 2:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda i: _similarity_row(evidence, i), range(m)))
    else:
        rows = [_similarity_row(evidence, i) for i in range(m)]

    for i, row in enumerate(rows):
        if row:
            table[i, i + 1:] = row
            table[i + 1:, i] = row

    values = table[np.ix_(index, index)] if n else np.zeros((0, 0))
    np.fill_diagonal(values, 0.0)

    logger.debug(
        f"Built {n}x{n} weight matrix from {m} distinct evidence sets "
        f"({len(labelled)} labelled, workers={workers})"
    )
    return WeightMatrix(values, len(labelled), order)


def connect_enn(w: WeightMatrix, epsilon: float) -> WeightMatrix:
    """Keep edges with weight >= epsilon"""
    values = np.where(w.values >= epsilon, w.values, 0.0)
    np.fill_diagonal(values, 0.0)
    return w.with_values(values)


def connect_knn(w: WeightMatrix, k: int) -> WeightMatrix:
    """
    Each vertex selects every edge whose weight is among its k largest
    distinct nonzero weights; an edge survives when either endpoint selects it.
    """
    values = w.values.copy()
    np.fill_diagonal(values, 0.0)
    selected = np.zeros(values.shape, dtype=bool)

    for i, row in enumerate(values):
        distinct = np.unique(row[row > 0])
        if distinct.size == 0:
            continue
        top = distinct[-k:]
        selected[i] = (row > 0) & np.isin(row, top)

    keep = selected | selected.T
    return w.with_values(np.where(keep, values, 0.0))


def sparsify(w: WeightMatrix, connector: str, parameter) -> WeightMatrix:
    if connector == "knn":
        return connect_knn(w, int(parameter))
    if connector == "enn":
        return connect_enn(w, float(parameter))
    raise ValueError(f"Unknown connector '{connector}'")


def write_weights(w: WeightMatrix, path: str):
    """Dense text dump: one row per line, space-separated"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    np.savetxt(path, w.values, fmt="%.12g", delimiter=" ")
    logger.debug(f"Wrote {w.n}x{w.n} weights to {path}")


__all__ = [
    "WeightMatrix",
    "build_weights",
    "connect_enn",
    "connect_knn",
    "sparsify",
    "write_weights",
]
