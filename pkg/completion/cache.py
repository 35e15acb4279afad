# completion/cache.py
"""
Cache of lifted labelled examples and Hoeffding filtering of contradictions.

Every labelled vertex is lifted to its canonical clause. The first batch
that sees a clause class supplies its representative (the smallest
rendering among that batch's occurrences); later ones only bump the count.
A clause whose opposite (same body, flipped head) is also cached is a
contradiction: with N = n_c + n_c', the minority side is dropped once the
frequency gap exceeds the Hoeffding margin for N. Until then both sides are
kept. Decisions are recomputed on every call.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from completion.partition import Vertex
from logic.clauses import Clause, lift, opposite
from logic.declarations import ModeSet, Schema

logger = logging.getLogger(__name__)


def hoeffding_epsilon(n: int, delta: float) -> float:
    """sqrt(ln(2/delta) / 2n)"""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n))


@dataclass
class CacheEntry:
    representative: Vertex
    count: int = 1


class LabelCache:
    """Canonical clause -> (first ground vertex, occurrences), in insertion order"""

    def __init__(self):
        self._entries: Dict[Clause, CacheEntry] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, clause: Clause) -> bool:
        return clause in self._entries

    def __iter__(self) -> Iterator[Tuple[Clause, CacheEntry]]:
        return iter(list(self._entries.items()))

    def get(self, clause: Clause) -> Optional[CacheEntry]:
        return self._entries.get(clause)

    def count(self, clause: Clause) -> int:
        entry = self._entries.get(clause)
        return entry.count if entry else 0

    def observe(self, clause: Clause, vertex: Vertex, count: int = 1) -> CacheEntry:
        """Add `count` occurrences; `vertex` becomes the representative only for a new class"""
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        entry = self._entries.get(clause)
        if entry is None:
            entry = self._entries[clause] = CacheEntry(vertex, count)
        else:
            entry.count += count
        return entry

    def total_count(self) -> int:
        return sum(e.count for e in self._entries.values())


@dataclass
class FilterResult:
    kept: List[Vertex]
    dropped: List[Clause]
    contradictions: int


def filter_cache(cache: LabelCache, delta: float) -> FilterResult:
    """Representatives that survive contradiction filtering, in cache order"""
    kept, dropped = [], []
    contradictions = 0
    for clause, entry in cache:
        rival = cache.get(opposite(clause))
        if rival is None:
            kept.append(entry.representative)
            continue
        contradictions += 1
        n = entry.count + rival.count
        p_c, p_rival = entry.count / n, rival.count / n
        if p_rival - p_c > hoeffding_epsilon(n, delta):
            dropped.append(clause)
            logger.info(f"Filtered contradicting clause {clause} ({entry.count} vs {rival.count})")
        else:
            kept.append(entry.representative)
    return FilterResult(kept, dropped, contradictions // 2)


def cache_update_and_filter(labelled: List[Vertex], state) -> Tuple[List[Vertex], object]:
    """
    Count the lifted clauses of `labelled` into the state's cache and return
    the filtered representatives.

    Args:
        labelled: vertices with known labels
        state:    SpliceState (cache, settings with modes/schema/delta, summary)

    Returns:
        (filtered labelled vertices, the same state updated in place)
    """
    update_cache(state.cache, labelled, state.settings.modes, state.settings.schema)
    result = filter_cache(state.cache, state.settings.delta)
    state.summary.record_filter(len(result.kept), len(result.dropped), len(state.cache))
    return result.kept, state


@lru_cache(maxsize=100_000)
def _lift(vertex: Vertex, modes: ModeSet, schema: Schema) -> Clause:
    return lift(vertex, modes, schema)


def update_cache(cache: LabelCache, labelled: List[Vertex], modes: ModeSet, schema: Schema):
    """
    Count one batch of labelled vertices into `cache`.

    A class new to the cache takes the occurrence with the smallest rendering
    as its representative, and new classes enter in clause order, so the
    order of the batch's atoms does not matter.
    """
    counts: Dict[Clause, int] = {}
    fresh: Dict[Clause, Vertex] = {}
    for vertex in labelled:
        clause = _lift(vertex, modes, schema)
        counts[clause] = counts.get(clause, 0) + 1
        if clause in cache:
            continue
        current = fresh.get(clause)
        if current is None or vertex.render() < current.render():
            fresh[clause] = vertex

    for clause in sorted(counts, key=Clause.render):
        vertex = fresh[clause] if clause in fresh else cache.get(clause).representative
        cache.observe(clause, vertex, counts[clause])


__all__ = [
    "hoeffding_epsilon",
    "CacheEntry",
    "LabelCache",
    "FilterResult",
    "filter_cache",
    "update_cache",
    "cache_update_and_filter",
]
