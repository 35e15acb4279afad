# utils/stream_import.py

"""Stream file ingestion: atom lines grouped into micro-batches"""

import logging
import os
import queue
import re
import threading
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from config import IO_CONFIG
from completion.partition import MicroBatch
from errors import ParseError, StreamFormatError
from logic.declarations import Schema
from logic.parser import build_atom, parse_raw
from logic.terms import Atom, Label

logger = logging.getLogger(__name__)

_TRAILING_COMMENT = re.compile(r"\s+#.*$")


def expand_paths(paths: Union[str, Sequence[str]]) -> List[str]:
    """Files in the given order; a directory contributes its files sorted by name"""
    if isinstance(paths, str):
        paths = [paths]
    files = []
    for path in paths:
        if os.path.isdir(path):
            for name in sorted(os.listdir(path)):
                full = os.path.join(path, name)
                if os.path.isfile(full) and not name.startswith("."):
                    files.append(full)
        elif os.path.isfile(path):
            files.append(path)
        else:
            raise StreamFormatError("no such file or directory", path, 0)
    return files


def _clean(line: str) -> str:
    line = line.strip()
    if line.startswith(IO_CONFIG["comment_prefix"]):
        return ""
    return _TRAILING_COMMENT.sub("", line)


def parse_line(line: str, schema: Schema, query_predicate: str) -> Tuple[str, Atom, Union[Label, bool]]:
    """
    Classify one atom line.

    Returns:
        ("query", atom, Label) or ("evidence", atom, truth)
    """
    prefix, node = parse_raw(line)
    atom = build_atom(node, False, schema)
    if atom.predicate == query_predicate:
        label = {"": Label.POSITIVE, "!": Label.NEGATIVE, "?": Label.UNKNOWN}[prefix]
        return "query", atom, label
    if prefix == "?":
        raise ParseError(f"'?' prefix on evidence atom '{atom.render()}'")
    return "evidence", atom, prefix != "!"


def _iter_file(path: str, schema: Schema, query_predicate: str) -> Iterator[Tuple[list, list]]:
    queries: List[Tuple[Atom, Label]] = []
    evidence: List[Tuple[Atom, bool]] = []
    with open(path, "r", encoding=IO_CONFIG["encoding"]) as f:
        for line_no, raw in enumerate(f, start=1):
            line = _clean(raw)
            if not line:
                continue
            if line == IO_CONFIG["batch_delimiter"]:
                if queries or evidence:
                    yield queries, evidence
                queries, evidence = [], []
                continue
            try:
                kind, atom, value = parse_line(line, schema, query_predicate)
            except ParseError as e:
                raise StreamFormatError(str(e), path, line_no) from e
            (queries if kind == "query" else evidence).append((atom, value))
    if queries or evidence:
        yield queries, evidence


def iter_batches(paths: Union[str, Sequence[str]], schema: Schema,
                 query_predicate: str, start_index: int = 0) -> Iterator[MicroBatch]:
    """
    Lazily read micro-batches from stream files.

    Batches are delimited by '---' lines inside a file and by file
    boundaries. Batches without atoms are skipped; indices are consecutive.

    Raises:
        StreamFormatError: bad atom or prefix, with file and line
    """
    index = start_index
    for path in expand_paths(paths):
        logger.debug(f"Reading stream file {path}")
        for queries, evidence in _iter_file(path, schema, query_predicate):
            yield MicroBatch(tuple(queries), tuple(evidence), index)
            index += 1


def ingest(paths: Union[str, Sequence[str]], schema: Schema, query_predicate: str,
           read_ahead_depth: int = 0) -> Iterator[MicroBatch]:
    """
    Batches of the given stream files in order. With `read_ahead_depth` > 0
    the next batches are parsed on a helper thread while the caller works.
    """
    batches = iter_batches(paths, schema, query_predicate)
    if read_ahead_depth > 0:
        return read_ahead(batches, read_ahead_depth)
    return batches


_DONE = object()


def read_ahead(batches: Iterable[MicroBatch], depth: int = 1) -> Iterator[MicroBatch]:
    """
    Prefetch up to `depth` batches on one helper thread while the caller
    works on the current one. Order is preserved; reader errors are re-raised
    in the caller at the position they occurred.
    """
    buffer: "queue.Queue" = queue.Queue(maxsize=depth)
    stop = threading.Event()

    def producer():
        try:
            for batch in batches:
                if stop.is_set():
                    return
                buffer.put(batch)
            buffer.put(_DONE)
        except BaseException as e:  # handed to the consumer
            buffer.put(e)

    worker = threading.Thread(target=producer, name="stream-read-ahead", daemon=True)
    worker.start()
    try:
        while True:
            item = buffer.get()
            if item is _DONE:
                return
            if isinstance(item, BaseException):
                raise item
            yield item
    finally:
        stop.set()
        while worker.is_alive():
            try:
                buffer.get_nowait()
            except queue.Empty:
                worker.join(timeout=0.05)


__all__ = [
    "expand_paths",
    "parse_line",
    "iter_batches",
    "ingest",
    "read_ahead",
]
