# distance/sets.py
"""
Distance between sets of ground atoms through optimal matching.

The pairwise atom distances form a K x M cost matrix (K <= M) that is
padded with zero rows to M x M. After the optimal assignment the M - K
atoms matched to padding are the unmatched ones, each costing 1:

    cost(E1, E2) = ((M - K) + sum of matched distances) / M
"""

import logging
import math
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, Tuple

import numpy as np

from config import SPLICE_CONFIG
from distance.atoms import atom_distance
from distance.hungarian import hungarian
from logic.terms import Atom

if TYPE_CHECKING:
    from completion.partition import Vertex

logger = logging.getLogger(__name__)


def cost_matrix(rows: Tuple[Atom, ...], cols: Tuple[Atom, ...]) -> np.ndarray:
    """Square matrix of atom distances, zero-padded to max(len(rows), len(cols))"""
    m = max(len(rows), len(cols))
    c = np.zeros((m, m))
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            c[i, j] = atom_distance(a, b)
    return c


def _ordered(atoms: Iterable[Atom]) -> Tuple[Atom, ...]:
    return tuple(sorted(atoms, key=Atom.render))


@lru_cache(maxsize=SPLICE_CONFIG["similarity_cache_size"])
def _matching_cost(small: Tuple[Atom, ...], large: Tuple[Atom, ...]) -> float:
    m, k = len(large), len(small)
    if m == 0:
        return 0.0
    c = cost_matrix(small, large)
    assignment = hungarian(c)
    matched = sorted(float(c[row, col]) for row, col in assignment.mapping if row < k)
    return ((m - k) + math.fsum(matched)) / m


def set_distance(e1: Iterable[Atom], e2: Iterable[Atom]) -> float:
    """
    Matching distance in [0, 1] between two collections of ground atoms.

    Duplicates are kept as separate rows. Two empty collections are at
    distance 0. The pair is put in a fixed order before matching, so the
    result is exactly symmetric.
    """
    a, b = _ordered(e1), _ordered(e2)
    if not all(x.is_ground() for x in a + b):
        raise ValueError("set distance is defined on ground atoms only")
    key_a = (len(a), tuple(x.render() for x in a))
    key_b = (len(b), tuple(x.render() for x in b))
    if key_b < key_a:
        a, b = b, a
    return _matching_cost(a, b)


@lru_cache(maxsize=SPLICE_CONFIG["similarity_cache_size"])
def evidence_similarity(e1: FrozenSet[Atom], e2: FrozenSet[Atom]) -> float:
    return 1.0 - set_distance(e1, e2)


def similarity(v1: "Vertex", v2: "Vertex") -> float:
    """1 - set distance of the two vertices' evidence; the query atoms are not compared"""
    return evidence_similarity(frozenset(v1.evidence), frozenset(v2.evidence))


def memo_info() -> Dict[str, int]:
    """Hits, misses and sizes of the distance memos"""
    info = {}
    for name, fn in (("atoms", atom_distance), ("matching", _matching_cost),
                     ("similarity", evidence_similarity)):
        stats = fn.cache_info()
        info[f"{name}_hits"] = stats.hits
        info[f"{name}_misses"] = stats.misses
        info[f"{name}_size"] = stats.currsize
    return info


def clear_memo():
    atom_distance.cache_clear()
    _matching_cost.cache_clear()
    evidence_similarity.cache_clear()


__all__ = [
    "cost_matrix",
    "set_distance",
    "similarity",
    "evidence_similarity",
    "memo_info",
    "clear_memo",
]
