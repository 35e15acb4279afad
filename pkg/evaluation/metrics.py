# evaluation/metrics.py
"""
Micro-averaged completion metrics.

Only query atoms that were unlabelled in the input are scored; given labels
are passed through by the engine and never counted.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Mapping, Optional, Set, Tuple

from completion.partition import MicroBatch
from completion.splice import CompletedBatch
from errors import EvaluationError
from logic.terms import Atom

logger = logging.getLogger(__name__)

Key = Tuple[int, Atom]


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


@dataclass(frozen=True)
class Metrics:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    @property
    def accuracy(self) -> float:
        return _ratio(self.tp + self.tn, self.total)

    def __add__(self, other: "Metrics") -> "Metrics":
        return Metrics(self.tp + other.tp, self.fp + other.fp,
                       self.fn + other.fn, self.tn + other.tn)

    def as_dict(self) -> Dict[str, float]:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "precision": self.precision, "recall": self.recall,
            "f1": self.f1, "accuracy": self.accuracy, "evaluated": self.total,
        }


# ─────────────────────────────────────────────
# Label maps
# ─────────────────────────────────────────────

def completed_labels(stream: Iterable[CompletedBatch]) -> Dict[Key, int]:
    return {(b.batch_index, atom.positive()): sign for b in stream for atom, sign in b.labels}


def inferred_keys(stream: Iterable[CompletedBatch]) -> Set[Key]:
    return {
        (b.batch_index, atom.positive())
        for b in stream
        for (atom, _), inferred in zip(b.labels, b.inferred) if inferred
    }


def batch_labels(batches: Iterable[MicroBatch]) -> Dict[Key, int]:
    """Known labels of parsed batches; unknown atoms are left out"""
    return {
        (b.batch_index, atom.positive()): label.sign
        for b in batches for atom, label in b.query_atoms if label.is_known
    }


def unknown_keys(batches: Iterable[MicroBatch]) -> Set[Key]:
    return {
        (b.batch_index, atom.positive())
        for b in batches for atom, label in b.query_atoms if not label.is_known
    }


def closed_world_labels(batches: Iterable[MicroBatch]) -> Dict[Key, int]:
    """Given labels of every query atom, reading unknown atoms as negative"""
    return {
        (b.batch_index, atom.positive()): label.sign if label.is_known else -1
        for b in batches for atom, label in b.query_atoms
    }


# ─────────────────────────────────────────────
# Evaluation
# ─────────────────────────────────────────────

def evaluate(predicted: Mapping[Hashable, int], truth: Mapping[Hashable, int],
             unknown: Optional[Iterable[Hashable]] = None) -> Metrics:
    """
    Compare predicted against true labels.

    Args:
        predicted: key -> +1 / -1
        truth:     key -> +1 / -1
        unknown:   keys to score (those unlabelled in the input);
                   every key of `predicted` when None

    Raises:
        EvaluationError: a scored key has no true label or no prediction
    """
    keys = list(predicted) if unknown is None else list(unknown)
    tp = fp = fn = tn = 0
    for key in keys:
        if key not in truth:
            raise EvaluationError(f"no ground-truth label for {_describe(key)}")
        if key not in predicted:
            raise EvaluationError(f"no prediction for {_describe(key)}")
        p, t = predicted[key] > 0, truth[key] > 0
        if p and t:
            tp += 1
        elif p:
            fp += 1
        elif t:
            fn += 1
        else:
            tn += 1
    metrics = Metrics(tp, fp, fn, tn)
    logger.debug(f"Evaluated {metrics.total} atoms: F1={metrics.f1:.4f}")
    return metrics


def evaluate_stream(stream: Iterable[CompletedBatch], truth_batches: Iterable[MicroBatch]) -> Metrics:
    """Score the completed atoms of `stream` against a fully labelled truth stream"""
    stream = list(stream)
    return evaluate(completed_labels(stream), batch_labels(truth_batches), inferred_keys(stream))


def _describe(key) -> str:
    if isinstance(key, tuple) and len(key) == 2 and isinstance(key[1], Atom):
        return f"{key[1].render()} (batch {key[0]})"
    return str(key)


__all__ = [
    "Metrics",
    "evaluate",
    "evaluate_stream",
    "completed_labels",
    "inferred_keys",
    "batch_labels",
    "unknown_keys",
    "closed_world_labels",
]
