# completion/splice.py
"""
The online completion loop.

Per micro-batch: partition into vertices, count the labelled ones into the
cache, take the filtered cached representatives plus the batch's unlabelled
vertices, build and sparsify the similarity graph, solve the harmonic
system and threshold. Given labels pass through untouched; inferred labels
never enter the cache.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Tuple

from config import SPLICE_CONFIG
from completion.cache import LabelCache, cache_update_and_filter
from completion.graph import build_weights, sparsify, write_weights
from completion.harmonic import solve, write_harmonic
from completion.partition import MicroBatch, partition, split_by_label
from distance.sets import memo_info
from errors import BatchError, ConfigError, SpliceError
from logic.declarations import ModeSet, Schema
from logic.terms import Atom

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpliceSettings:
    schema:            Schema
    modes:             ModeSet
    query_predicate:   Optional[str] = None
    connector:         str = SPLICE_CONFIG["connector"]
    k:                 int = SPLICE_CONFIG["k"]
    epsilon:           float = SPLICE_CONFIG["epsilon"]
    delta:             float = SPLICE_CONFIG["delta"]
    workers:           int = SPLICE_CONFIG["workers"]
    regularization:    float = SPLICE_CONFIG["regularization"]
    threshold:         float = SPLICE_CONFIG["threshold"]
    dump_weights_dir:  Optional[str] = None
    dump_harmonic_dir: Optional[str] = None

    def __post_init__(self):
        if self.connector not in ("knn", "enn"):
            raise ConfigError(f"Unknown connector '{self.connector}' (expected knn or enn)")
        if self.connector == "knn" and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.connector == "enn" and not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def connector_parameter(self):
        return self.k if self.connector == "knn" else self.epsilon


@dataclass
class StreamSummary:
    batches:            int = 0
    labelled:           int = 0
    unlabelled:         int = 0
    filtered_labelled:  int = 0
    dropped_clauses:    int = 0
    cache_size:         int = 0
    peak_cache_size:    int = 0
    evidence_seen:      int = 0
    completed_positive: int = 0
    completed_negative: int = 0
    unsupported_batches: int = 0

    def record_filter(self, kept: int, dropped: int, cache_size: int):
        self.filtered_labelled += kept
        self.dropped_clauses += dropped
        self.cache_size = cache_size
        self.peak_cache_size = max(self.peak_cache_size, cache_size)

    def visit_evidence(self, _atom: Atom):
        self.evidence_seen += 1

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SpliceState:
    settings:      SpliceSettings
    cache:         LabelCache = field(default_factory=LabelCache)
    batch_counter: int = 0
    summary:       StreamSummary = field(default_factory=StreamSummary)


@dataclass(frozen=True)
class CompletedBatch:
    batch_index: int
    labels:      Tuple[Tuple[Atom, int], ...]          # query atom (positive form), +1 / -1
    evidence:    Tuple[Tuple[Atom, bool], ...] = ()
    inferred:    Tuple[bool, ...] = ()                 # True where the label was completed


def _dump_path(directory: str, prefix: str, batch_index: int) -> str:
    return os.path.join(directory, f"{prefix}_batch{batch_index:05d}.txt")


def _complete(batch: MicroBatch, state: SpliceState) -> List[Tuple[Atom, int]]:
    settings = state.settings
    summary = state.summary
    summary.batches += 1

    vertices = partition(batch, settings.modes, settings.schema, on_visit=summary.visit_evidence)
    labelled, unlabelled = split_by_label(vertices)
    summary.labelled += len(labelled)
    summary.unlabelled += len(unlabelled)

    filtered, state = cache_update_and_filter(labelled, state)

    if not unlabelled:
        inferred: List[int] = []
    elif not filtered:
        logger.warning(
            f"Batch {batch.batch_index}: no labelled examples available; "
            f"{len(unlabelled)} unlabelled atom(s) default to negative"
        )
        summary.unsupported_batches += 1
        inferred = [-1] * len(unlabelled)
    else:
        w = build_weights(list(filtered) + unlabelled, settings.workers)
        wp = sparsify(w, settings.connector, settings.connector_parameter)
        y_l = [v.label.sign for v in wp.order[:wp.n_labelled]]
        solution = solve(wp, y_l, settings.regularization, settings.threshold)
        inferred = [int(x) for x in solution.labels_u]

        if settings.dump_weights_dir:
            write_weights(wp, _dump_path(settings.dump_weights_dir, "weights", batch.batch_index))
        if settings.dump_harmonic_dir:
            write_harmonic(solution, _dump_path(settings.dump_harmonic_dir, "harmonic", batch.batch_index))
        logger.debug(
            f"Batch {batch.batch_index}: graph of {wp.n} vertices, {wp.edge_count()} edges"
        )

    summary.completed_positive += sum(1 for x in inferred if x > 0)
    summary.completed_negative += sum(1 for x in inferred if x < 0)

    completed = []
    remaining = iter(inferred)
    for vertex in vertices:
        sign = vertex.label.sign if vertex.label.is_known else next(remaining)
        completed.append((vertex.query, sign))

    logger.info(
        f"Batch {batch.batch_index}: {len(labelled)} labelled, {len(unlabelled)} unlabelled, "
        f"{len(filtered)} cached examples used, cache size {len(state.cache)}"
    )
    return completed


def process_batch(batch: MicroBatch, state: SpliceState) -> Tuple[List[Tuple[Atom, int]], SpliceState]:
    """
    Complete one micro-batch.

    Returns:
        ([(query atom, +1 / -1)] in query input order, updated state)

    Raises:
        BatchError: wrapping any failure, with the batch index
    """
    try:
        completed = _complete(batch, state)
    except BatchError:
        raise
    except (SpliceError, ValueError) as e:
        raise BatchError(batch.batch_index, e) from e
    state.batch_counter += 1
    return completed, state


def iter_completed(batches: Iterable[MicroBatch], state: SpliceState) -> Iterator[CompletedBatch]:
    """Lazily fold process_batch over `batches`, yielding each completed batch in order"""
    for batch in batches:
        labels, state = process_batch(batch, state)
        yield CompletedBatch(
            batch.batch_index,
            tuple(labels),
            tuple(batch.evidence_atoms),
            tuple(not label.is_known for _, label in batch.query_atoms),
        )


def run_stream(batches: Iterable[MicroBatch], settings: SpliceSettings,
               state: Optional[SpliceState] = None) -> Tuple[List[CompletedBatch], StreamSummary]:
    """Single pass over `batches`; returns the completed stream and its summary"""
    state = state or SpliceState(settings)
    completed = list(iter_completed(batches, state))
    logger.info(
        f"Stream done: {state.summary.batches} batches, cache size {state.summary.cache_size}, "
        f"{state.summary.completed_positive} completed positive, "
        f"{state.summary.completed_negative} completed negative"
    )
    logger.debug(f"Distance memos: {memo_info()}")
    return completed, state.summary


__all__ = [
    "SpliceSettings",
    "StreamSummary",
    "SpliceState",
    "CompletedBatch",
    "process_batch",
    "iter_completed",
    "run_stream",
]
