# utils/cache_snapshot.py
"""
Label cache snapshots: export, import.

One line per cache entry, fields separated by a tab:

    canonical clause <TAB> count [<TAB> ground representative]

The representative is written as a ground clause (query atom as head,
evidence as body). Lines without it are accepted; the representative is
then the clause with each variable replaced by a fresh constant.
"""

import logging
import os
from typing import Any, Dict

from config import IO_CONFIG
from completion.cache import LabelCache
from completion.partition import Vertex
from errors import ParseError, StreamFormatError
from logic.clauses import CLAUSE_NECK, Clause, ground_clause, parse_clause
from logic.declarations import Schema
from logic.parser import build_atom, parse_atoms, parse_raw
from logic.terms import Atom, Label

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# Representatives
# ─────────────────────────────────────────────

def _vertex_from_ground(head: Atom, body) -> Vertex:
    label = Label.NEGATIVE if head.negated else Label.POSITIVE
    return Vertex(head.positive(), label, frozenset(body))


def render_representative(vertex: Vertex) -> str:
    head = vertex.query.with_negation(vertex.label is Label.NEGATIVE).render()
    body = sorted(a.render() for a in vertex.evidence)
    return f"{head} {CLAUSE_NECK} {', '.join(body)}" if body else head


def parse_representative(text: str, schema: Schema) -> Vertex:
    head_text, _, body_text = text.partition(CLAUSE_NECK)
    prefix, node = parse_raw(head_text)
    if prefix == "?":
        raise ParseError("representative head cannot be unlabelled")
    head = build_atom(node, prefix == "!", schema)
    return _vertex_from_ground(head, parse_atoms(body_text, schema))


def skolem_representative(clause: Clause) -> Vertex:
    head, body = ground_clause(clause)
    return _vertex_from_ground(head, body)


# ─────────────────────────────────────────────
# Export
# ─────────────────────────────────────────────

def export_cache(cache: LabelCache, path: str) -> Dict[str, Any]:
    """
    Write `cache` to `path` in insertion order.

    Returns:
        Dict with keys: success (bool), path (str), entries (int), error (str|None)
    """
    try:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding=IO_CONFIG["encoding"], newline="\n") as f:
            for clause, entry in cache:
                f.write(f"{clause.render()}\t{entry.count}\t{render_representative(entry.representative)}\n")
        logger.info(f"Cache snapshot written → {path} ({len(cache)} entries)")
        return {"success": True, "path": path, "entries": len(cache), "error": None}

    except OSError as e:
        logger.error(f"export_cache error: {e}")
        return {"success": False, "path": None, "entries": 0, "error": str(e)}


# ─────────────────────────────────────────────
# Import
# ─────────────────────────────────────────────

def read_cache(path: str, schema: Schema) -> LabelCache:
    """
    Parse a snapshot file into a new LabelCache.

    Raises:
        StreamFormatError: malformed line, with file and line number
    """
    cache = LabelCache()
    with open(path, "r", encoding=IO_CONFIG["encoding"]) as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith(IO_CONFIG["comment_prefix"]):
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise StreamFormatError(f"expected 2 or 3 tab-separated fields, got {len(fields)}",
                                        path, line_no)
            try:
                clause = parse_clause(fields[0], schema)
                count = int(fields[1])
                vertex = (parse_representative(fields[2], schema) if len(fields) == 3
                          else skolem_representative(clause))
                cache.observe(clause, vertex, count)
            except (ParseError, ValueError) as e:
                raise StreamFormatError(str(e), path, line_no) from e
    return cache


def import_cache(path: str, schema: Schema) -> Dict[str, Any]:
    """
    Load a snapshot for a warm restart.

    Returns:
        Dict with keys: success (bool), path (str), entries (int),
        cache (LabelCache|None), error (str|None), and on failure kind:
        "missing", "format" (malformed snapshot) or "io"
    """
    if not os.path.exists(path):
        return {"success": False, "path": path, "entries": 0, "cache": None,
                "error": f"Snapshot not found: {path}", "kind": "missing"}
    try:
        cache = read_cache(path, schema)
        logger.info(f"Cache snapshot loaded ← {path} ({len(cache)} entries)")
        return {"success": True, "path": path, "entries": len(cache), "cache": cache, "error": None}

    except (StreamFormatError, UnicodeDecodeError) as e:
        logger.error(f"import_cache error: {e}")
        return {"success": False, "path": path, "entries": 0, "cache": None, "error": str(e),
                "kind": "format"}

    except OSError as e:
        logger.error(f"import_cache error: {e}")
        return {"success": False, "path": path, "entries": 0, "cache": None, "error": str(e),
                "kind": "io"}


__all__ = [
    "export_cache",
    "import_cache",
    "read_cache",
    "render_representative",
    "parse_representative",
    "skolem_representative",
]
