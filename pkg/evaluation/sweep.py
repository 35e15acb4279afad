# evaluation/sweep.py
"""
Supervision-level sweep on a synthetic stream.

For every labelling regime and random placement one label plan is drawn;
each supervision level reveals a prefix of it, so lower levels label a
subset of what higher levels label. Every level is scored on the same
hold-out: the query atoms still unlabelled at the highest level. Evidence
is generated once per sweep, so the distance memos carry over between runs.

Next to the hold-out scores each run records its completion time and two
whole-stream F1 values: the completed stream, and the closed-world reading
of the masked input where every unknown atom counts as negative.
"""

import logging
import math
import time
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from config import SPLICE_CONFIG, SWEEP_CONFIG
from completion.splice import SpliceSettings, run_stream
from evaluation.generator import (
    PLACEMENTS,
    SYNTHETIC_DECLARATIONS,
    GeneratorParams,
    apply_plan,
    generate_truth,
    label_plan,
)
from evaluation.metrics import batch_labels, closed_world_labels, completed_labels, evaluate, unknown_keys
from logic.declarations import parse_declarations

logger = logging.getLogger(__name__)

Connector = Tuple[str, float]

RUN_COLUMNS = [
    "regime", "connector", "parameter", "level", "placement",
    "f1", "precision", "recall", "accuracy", "evaluated",
    "stream_f1", "closed_world_f1", "runtime_s",
]


def default_connectors() -> List[Connector]:
    return ([("knn", k) for k in SWEEP_CONFIG["k_values"]]
            + [("enn", e) for e in SWEEP_CONFIG["epsilon_values"]])


def placement_seed(seed: int, placement: int) -> int:
    return seed * 1_000_003 + placement + 1


def run_sweep(seed: int = 0,
              params: Optional[GeneratorParams] = None,
              levels: Sequence[int] = SWEEP_CONFIG["levels"],
              placements: int = SWEEP_CONFIG["placements"],
              regimes: Iterable[str] = PLACEMENTS,
              connectors: Optional[Sequence[Connector]] = None,
              delta: float = SPLICE_CONFIG["delta"],
              workers: int = 1) -> pd.DataFrame:
    """
    One row per (regime, connector, parameter, level, placement) run.

    Args:
        seed:       generator seed for the evidence
        params:     generator parameters (label fraction and placement are overridden)
        levels:     supervision levels in percent
        placements: random label placements per regime
        regimes:    'whole-batch' and/or 'per-batch'
        connectors: (name, parameter) pairs; default every k and epsilon of SWEEP_CONFIG
        delta:      Hoeffding confidence
        workers:    similarity threads per batch

    Returns:
        DataFrame with the RUN_COLUMNS columns. f1, precision, recall,
        accuracy and evaluated score the hold-out; stream_f1 and
        closed_world_f1 score every query atom.
    """
    params = params or GeneratorParams()
    connectors = list(connectors) if connectors is not None else default_connectors()
    levels = sorted(levels)
    declarations = parse_declarations(SYNTHETIC_DECLARATIONS, source="<synthetic>")
    truth = generate_truth(seed, params)
    truth_labels = batch_labels(truth)

    rows = []
    for regime in regimes:
        for p in range(placements):
            plan = label_plan(truth, regime, placement_seed(seed, p), params.noise)
            hold_out = unknown_keys(apply_plan(truth, plan, levels[-1] / 100.0)) if levels else set()
            for level in levels:
                masked = apply_plan(truth, plan, level / 100.0)
                closed_world = evaluate(closed_world_labels(masked), truth_labels)
                for name, parameter in connectors:
                    settings = SpliceSettings(
                        schema=declarations.schema,
                        modes=declarations.modes,
                        query_predicate=declarations.query_predicate,
                        connector=name,
                        k=int(parameter) if name == "knn" else SPLICE_CONFIG["k"],
                        epsilon=float(parameter) if name == "enn" else SPLICE_CONFIG["epsilon"],
                        delta=delta,
                        workers=workers,
                    )
                    started = time.perf_counter()
                    completed, _ = run_stream(masked, settings)
                    runtime = time.perf_counter() - started
                    predicted = completed_labels(completed)
                    metrics = evaluate(predicted, truth_labels, hold_out)
                    rows.append({
                        "regime": regime,
                        "connector": name,
                        "parameter": parameter,
                        "level": level,
                        "placement": p,
                        "f1": metrics.f1,
                        "precision": metrics.precision,
                        "recall": metrics.recall,
                        "accuracy": metrics.accuracy,
                        "evaluated": metrics.total,
                        "stream_f1": evaluate(predicted, truth_labels).f1,
                        "closed_world_f1": closed_world.f1,
                        "runtime_s": runtime,
                    })
        logger.info(f"Sweep {regime} done ({placements} placements, {len(levels)} levels)")

    return pd.DataFrame(rows, columns=RUN_COLUMNS)


def aggregate_sweep(runs: pd.DataFrame) -> pd.DataFrame:
    """
    Per (regime, connector, parameter, level): mean F1 and its standard error,
    mean whole-stream and closed-world F1, and mean runtime
    """
    keys = ["regime", "connector", "parameter", "level"]
    grouped = runs.groupby(keys, sort=True)
    summary = grouped.agg(
        runs=("f1", "count"),
        f1_mean=("f1", "mean"),
        f1_std=("f1", "std"),
        stream_f1_mean=("stream_f1", "mean"),
        closed_world_f1_mean=("closed_world_f1", "mean"),
        runtime_s_mean=("runtime_s", "mean"),
    ).reset_index()
    summary["f1_std"] = summary["f1_std"].fillna(0.0)
    summary["f1_sem"] = summary["f1_std"] / summary["runs"].map(lambda n: math.sqrt(n) if n else 1.0)
    return summary[keys + ["runs", "f1_mean", "f1_sem", "stream_f1_mean",
                           "closed_world_f1_mean", "runtime_s_mean"]]


def write_sweep(runs: pd.DataFrame, path: str, aggregated: bool = True) -> str:
    frame = aggregate_sweep(runs) if aggregated else runs
    frame.to_csv(path, index=False, float_format="%.6f")
    logger.info(f"Sweep results written to {path}")
    return path


__all__ = [
    "Connector",
    "RUN_COLUMNS",
    "default_connectors",
    "placement_seed",
    "run_sweep",
    "aggregate_sweep",
    "write_sweep",
]
