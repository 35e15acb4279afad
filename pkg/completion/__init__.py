# completion/__init__.py
"""
Public API for online label completion.

Usage:
    from completion import SpliceSettings, SpliceState, process_batch, run_stream
"""

# ── Partitioning ─────────────────────────────────────────────────────────────
from .partition import MicroBatch, Vertex, partition, split_by_label

# ── Graph and harmonic solve ─────────────────────────────────────────────────
from .graph import (
    WeightMatrix,
    build_weights,
    connect_enn,
    connect_knn,
    sparsify,
    write_weights,
)
from .harmonic import HarmonicSolution, laplacian, solve, threshold, write_harmonic

# ── Cache ────────────────────────────────────────────────────────────────────
from .cache import (
    hoeffding_epsilon,
    CacheEntry,
    LabelCache,
    filter_cache,
    update_cache,
    cache_update_and_filter,
)

# ── Stream loop ──────────────────────────────────────────────────────────────
from .splice import (
    SpliceSettings,
    StreamSummary,
    SpliceState,
    CompletedBatch,
    process_batch,
    iter_completed,
    run_stream,
)

__all__ = [
    'MicroBatch', 'Vertex', 'partition', 'split_by_label',
    'WeightMatrix', 'build_weights', 'connect_enn', 'connect_knn', 'sparsify', 'write_weights',
    'HarmonicSolution', 'laplacian', 'solve', 'threshold', 'write_harmonic',
    'hoeffding_epsilon', 'CacheEntry', 'LabelCache', 'filter_cache', 'update_cache',
    'cache_update_and_filter',
    'SpliceSettings', 'StreamSummary', 'SpliceState', 'CompletedBatch',
    'process_batch', 'iter_completed', 'run_stream',
]
