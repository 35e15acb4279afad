# utils/report_tables.py

"""Plain-text tables for metrics, stream summaries and per-atom completions"""

import logging
import math
from typing import Iterable, Optional

import pandas as pd

from completion.partition import MicroBatch
from completion.splice import CompletedBatch, StreamSummary
from evaluation.metrics import Metrics, batch_labels

logger = logging.getLogger(__name__)


def metrics_frame(metrics: Metrics) -> pd.DataFrame:
    return pd.DataFrame([metrics.as_dict()])


def summary_frame(summary: StreamSummary) -> pd.DataFrame:
    items = summary.as_dict()
    return pd.DataFrame({"counter": list(items), "value": list(items.values())})


def completion_frame(stream: Iterable[CompletedBatch],
                     truth_batches: Optional[Iterable[MicroBatch]] = None) -> pd.DataFrame:
    """
    One row per query atom: batch, atom, label, inferred, and truth when a
    truth stream is given.
    """
    truth = batch_labels(truth_batches) if truth_batches is not None else None
    rows = []
    for batch in stream:
        for (atom, sign), inferred in zip(batch.labels, batch.inferred):
            row = {
                "batch": batch.batch_index,
                "atom": atom.render(),
                "label": sign,
                "inferred": inferred,
            }
            if truth is not None:
                row["truth"] = truth.get((batch.batch_index, atom), 0)
            rows.append(row)
    columns = ["batch", "atom", "label", "inferred"] + (["truth"] if truth is not None else [])
    return pd.DataFrame(rows, columns=columns)


def filter_frame(df: pd.DataFrame, search: str = "", column: Optional[str] = None) -> pd.DataFrame:
    """Case-insensitive substring filter over one column or all of them"""
    if not search or df.empty:
        return df
    if column is not None:
        mask = df[column].astype(str).str.contains(search, case=False, na=False, regex=False)
    else:
        mask = df.astype(str).apply(
            lambda row: row.str.contains(search, case=False, na=False, regex=False).any(),
            axis=1
        )
    return df[mask]


def errors_frame(completions: pd.DataFrame) -> pd.DataFrame:
    """Completed rows whose label disagrees with the truth column"""
    if "truth" not in completions.columns:
        raise ValueError("completion table has no truth column")
    wrong = completions["inferred"] & (completions["label"] != completions["truth"])
    return completions[wrong]


def paginate(df: pd.DataFrame, page: int = 1, per_page: int = 20) -> pd.DataFrame:
    """Rows of 1-based `page`; pages past the end are clamped to the last one"""
    total_pages = math.ceil(len(df) / per_page) if len(df) > 0 else 1
    page = min(max(1, page), total_pages)
    start = (page - 1) * per_page
    return df.iloc[start:start + per_page]


def format_table(df: pd.DataFrame, float_format: str = "{:.4f}", max_rows: Optional[int] = None) -> str:
    if df.empty:
        return "(no rows)"
    shown = df if max_rows is None else df.head(max_rows)
    text = shown.to_string(index=False, float_format=float_format.format)
    if max_rows is not None and len(df) > max_rows:
        text += f"\n... {len(df) - max_rows} more row(s)"
    return text


__all__ = [
    "metrics_frame",
    "summary_frame",
    "completion_frame",
    "filter_frame",
    "errors_frame",
    "paginate",
    "format_table",
]
