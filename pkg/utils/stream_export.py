# utils/stream_export.py

"""Writing streams back out in the input syntax"""

import logging
import os
from typing import Iterable, List

from config import IO_CONFIG
from completion.partition import MicroBatch
from completion.splice import CompletedBatch

logger = logging.getLogger(__name__)


def _signed(atom, sign: int) -> str:
    return ("!" if sign < 0 else "") + atom.positive().render()


def render_completed(stream: Iterable[CompletedBatch]) -> str:
    """Query atoms first (input order), then evidence; '---' between batches"""
    blocks: List[str] = []
    for batch in stream:
        lines = [_signed(atom, sign) for atom, sign in batch.labels]
        lines += [("" if truth else "!") + atom.render() for atom, truth in batch.evidence]
        blocks.append("\n".join(lines))
    if not blocks:
        return ""
    return f"\n{IO_CONFIG['batch_delimiter']}\n".join(blocks) + "\n"


def render_batches(batches: Iterable[MicroBatch]) -> str:
    """Render micro-batches with '?' / '!' supervision prefixes"""
    blocks: List[str] = []
    for batch in batches:
        lines = [label.prefix + atom.render() for atom, label in batch.query_atoms]
        lines += [("" if truth else "!") + atom.render() for atom, truth in batch.evidence_atoms]
        blocks.append("\n".join(lines))
    if not blocks:
        return ""
    return f"\n{IO_CONFIG['batch_delimiter']}\n".join(blocks) + "\n"


def _write(text: str, path: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding=IO_CONFIG["encoding"], newline="\n") as f:
        f.write(text)


def emit_completed(stream: Iterable[CompletedBatch], path: str) -> int:
    """
    Write a completed stream to `path`, one batch at a time as `stream` yields.

    Batches go to a temporary file next to `path`, renamed into place once
    the stream is exhausted; if the stream raises, the temporary file is
    removed and `path` is left untouched.

    Returns:
        number of batches written
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    partial = f"{path}.part"
    count = 0
    try:
        with open(partial, "w", encoding=IO_CONFIG["encoding"], newline="\n") as f:
            for batch in stream:
                if count:
                    f.write(f"{IO_CONFIG['batch_delimiter']}\n")
                f.write(render_completed([batch]))
                count += 1
        os.replace(partial, path)
    except BaseException:
        if os.path.exists(partial):
            os.remove(partial)
        raise
    logger.info(f"Wrote {count} completed batch(es) to {path}")
    return count


def write_batches(batches: Iterable[MicroBatch], path: str) -> int:
    batches = list(batches)
    _write(render_batches(batches), path)
    return len(batches)


__all__ = ["render_completed", "render_batches", "emit_completed", "write_batches"]
