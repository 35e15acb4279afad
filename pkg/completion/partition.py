# completion/partition.py
"""
Split a micro-batch into vertices: one per ground query atom, each with the
true evidence atoms that share typed constants with it.

For evidence atom e and query atom q let C be the (constant, type) pairs of
e whose type also occurs in q. e joins q's vertex when every pair in C also
occurs in q. Evidence predicates with recall 0 (or without any mode) are
skipped.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from logic.declarations import ModeSet, Schema, typed_constants
from logic.terms import Atom, Label

logger = logging.getLogger(__name__)

_SUBSET_LIMIT = 10


@dataclass(frozen=True)
class MicroBatch:
    query_atoms:    Tuple[Tuple[Atom, Label], ...] = ()
    evidence_atoms: Tuple[Tuple[Atom, bool], ...] = ()
    batch_index:    int = 0

    def counts(self) -> dict:
        labelled = sum(1 for _, label in self.query_atoms if label.is_known)
        return {
            "query": len(self.query_atoms),
            "labelled": labelled,
            "unlabelled": len(self.query_atoms) - labelled,
            "evidence": len(self.evidence_atoms),
        }


@dataclass(frozen=True)
class Vertex:
    query:    Atom
    label:    Label
    evidence: FrozenSet[Atom] = field(default_factory=frozenset)

    @property
    def is_labelled(self) -> bool:
        return self.label.is_known

    def render(self) -> str:
        body = ", ".join(sorted(a.render() for a in self.evidence))
        return f"{self.label.prefix}{self.query.render()} <- {{{body}}}"


def partition(batch: MicroBatch, modes, schema: Schema,
              on_visit: Optional[Callable[[Atom], None]] = None) -> List[Vertex]:
    """
    One vertex per query atom, in query input order.

    `on_visit` is called once for every evidence atom read from the batch.

    Raises:
        UnknownSymbolError: a query or evidence predicate has no signature
    """
    modes = ModeSet.coerce(modes)

    indexed = []
    seen = set()
    for atom, truth in batch.evidence_atoms:
        if on_visit is not None:
            on_visit(atom)
        if not truth or atom.negated or atom in seen:
            continue
        seen.add(atom)
        if modes.recall(atom.predicate) <= 0:
            continue
        indexed.append((atom, frozenset(typed_constants(atom, schema))))

    # per distinct query type set: restricted constants of e -> evidence atoms
    groups: Dict[FrozenSet[str], Dict[FrozenSet, List[Atom]]] = {}

    vertices = []
    for query, label in batch.query_atoms:
        q_typed = frozenset(typed_constants(query, schema))
        q_types = frozenset(t for _, t in q_typed)
        if q_types not in groups:
            by_key: Dict[FrozenSet, List[Atom]] = {}
            for atom, typed in indexed:
                key = frozenset(pair for pair in typed if pair[1] in q_types)
                by_key.setdefault(key, []).append(atom)
            groups[q_types] = by_key
        by_key = groups[q_types]

        if len(q_typed) <= _SUBSET_LIMIT:
            pairs = sorted(q_typed)
            keys = (frozenset(s) for r in range(len(pairs) + 1) for s in combinations(pairs, r))
            evidence = frozenset(a for key in keys for a in by_key.get(key, ()))
        else:
            evidence = frozenset(a for key, atoms in by_key.items() if key <= q_typed for a in atoms)
        vertices.append(Vertex(query.positive(), label, evidence))

    logger.debug(
        f"Batch {batch.batch_index}: {len(vertices)} vertices from "
        f"{len(batch.query_atoms)} query and {len(indexed)} usable evidence atoms"
    )
    return vertices


def split_by_label(vs: Sequence[Vertex]) -> Tuple[List[Vertex], List[Vertex]]:
    """Order-stable split into (labelled, unlabelled)"""
    labelled = [v for v in vs if v.label.is_known]
    unlabelled = [v for v in vs if not v.label.is_known]
    return labelled, unlabelled


__all__ = ["MicroBatch", "Vertex", "partition", "split_by_label"]
