# logic/clauses.py
"""
Lifted (variabilized) clauses.

A labelled vertex lifts to  head :- body  where the head is the query atom
(negated for a negative label) and the body is the vertex evidence. Leaves at
variable-marked mode positions become variables; leaves at '#' positions keep
their constants. The same (constant, type) pair always maps to the same
variable, so co-reference between head and body survives lifting.

Clauses are kept in canonical form: head variables are numbered first, left
to right; then body atoms are taken smallest-rendering-first, numbering new
variables on first occurrence. Unnumbered variables compare by a structural
colour; ties are broken by the smallest completed rendering, skipping
choices that a variable swap shows to be equivalent. Two clauses are
alpha-equivalent exactly when their canonical renderings are equal, which
is also what == compares.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from errors import MissingModeError, ParseError
from logic.declarations import ModeSet, Schema, typed_leaves
from logic.parser import build_atom, parse_atoms, parse_raw
from logic.terms import Atom, Constant, Label, Variable, iter_leaves, map_leaves

if TYPE_CHECKING:
    from completion.partition import Vertex

logger = logging.getLogger(__name__)

CLAUSE_NECK = ":-"
SKOLEM_PREFIX = "sk"


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: Tuple[Atom, ...] = ()

    def render(self) -> str:
        if not self.body:
            return self.head.render()
        return f"{self.head.render()} {CLAUSE_NECK} {', '.join(a.render() for a in self.body)}"

    def __str__(self) -> str:
        return self.render()


# ─────────────────────────────────────────────
# Canonical form
# ─────────────────────────────────────────────

Colours = Dict[Variable, str]
Mapping = Dict[Variable, Variable]


def _variables(atom: Atom) -> List[Variable]:
    return [leaf for leaf in iter_leaves(atom) if isinstance(leaf, Variable)]


def _occurrence(tag: str, atom: Atom, variable: Variable, colours: Colours) -> str:
    """`atom` seen from `variable`: itself as '@', other variables by colour"""
    shown = map_leaves(
        atom,
        lambda leaf: (Variable("@") if leaf == variable else Variable(f"~{colours[leaf]}"))
        if isinstance(leaf, Variable) else leaf,
    )
    return f"{tag}{shown.render()}"


def variable_colours(head: Atom, body: Sequence[Atom]) -> Colours:
    """
    Renaming-invariant colour per variable, refined from the atoms each
    variable occurs in until the number of colour classes stops growing.
    """
    occurs: Dict[Variable, List[Tuple[str, Atom]]] = {}
    for tag, atom in [("h:", head)] + [("b:", a) for a in body]:
        for variable in dict.fromkeys(_variables(atom)):
            occurs.setdefault(variable, []).append((tag, atom))

    colours = {v: "0" for v in occurs}
    classes = 1 if colours else 0
    while True:
        signatures = {
            v: (colours[v], tuple(sorted(_occurrence(tag, a, v, colours) for tag, a in seen)))
            for v, seen in occurs.items()
        }
        ranks = {sig: str(i) for i, sig in enumerate(sorted(set(signatures.values())))}
        colours = {v: ranks[sig] for v, sig in signatures.items()}
        if len(ranks) == classes:
            return colours
        classes = len(ranks)


def _partial_render(atom: Atom, mapping: Mapping, colours: Colours) -> str:
    """
    Rendering with assigned variables numbered and the others shown by colour.
    '~' sorts after the digits, so atoms on numbered variables come first.
    """
    return map_leaves(
        atom,
        lambda leaf: mapping.get(leaf, Variable(f"_~{colours.get(leaf, '')}"))
        if isinstance(leaf, Variable) else leaf,
    ).render()


def _extend(atom: Atom, mapping: Mapping) -> Mapping:
    extended = dict(mapping)
    for leaf in iter_leaves(atom):
        if isinstance(leaf, Variable) and leaf not in extended:
            extended[leaf] = Variable(f"_{len(extended) + 1}")
    return extended


def _rename(atom: Atom, mapping: Mapping) -> Atom:
    return map_leaves(atom, lambda leaf: mapping[leaf] if isinstance(leaf, Variable) else leaf)


def _swap(a: Atom, b: Atom, mapping: Mapping) -> Optional[Mapping]:
    """Involution on unnumbered variables taking `a` to `b`, or None"""
    swap: Mapping = {}
    for x, y in zip(_variables(a), _variables(b)):
        if x == y:
            if swap.setdefault(x, x) != x:
                return None
            continue
        if x in mapping or y in mapping:
            return None
        if swap.get(x, y) != y or swap.get(y, x) != x:
            return None
        swap[x], swap[y] = y, x
    return swap


def _interchangeable(a: Atom, b: Atom, remaining: FrozenSet[Atom], mapping: Mapping) -> bool:
    swap = _swap(a, b, mapping)
    if swap is None:
        return False
    moved = {map_leaves(atom, lambda leaf: swap.get(leaf, leaf)) for atom in remaining}
    return moved == remaining


def _canonical_body(remaining: Tuple[Atom, ...], mapping: Mapping, colours: Colours,
                    memo: Dict) -> Tuple[Atom, ...]:
    if not remaining:
        return ()

    pool = frozenset(remaining)
    in_use = {v for atom in remaining for v in _variables(atom)}
    key = (pool, len(mapping), frozenset((v, n) for v, n in mapping.items() if v in in_use))
    if key in memo:
        return memo[key]

    partials = [_partial_render(a, mapping, colours) for a in remaining]
    smallest = min(partials)

    best: Optional[Tuple[Atom, ...]] = None
    best_key: Optional[Tuple[str, ...]] = None
    explored: List[Atom] = []
    for i, atom in enumerate(remaining):
        if partials[i] != smallest:
            continue
        # symmetric choices lead to the same clause
        if any(_interchangeable(atom, seen, pool, mapping) for seen in explored):
            continue
        explored.append(atom)
        extended = _extend(atom, mapping)
        rest = remaining[:i] + remaining[i + 1:]
        candidate = (_rename(atom, extended),) + _canonical_body(rest, extended, colours, memo)
        rendered = tuple(a.render() for a in candidate)
        if best_key is None or rendered < best_key:
            best, best_key = candidate, rendered
    memo[key] = best
    return best


def canonicalize(head: Atom, body: Iterable[Atom]) -> Clause:
    """Renumber variables and order the body so alpha-equivalent clauses coincide"""
    unique = set(body)
    colours = variable_colours(head, list(unique))
    mapping = _extend(head, {})
    ordered = tuple(sorted(unique, key=lambda a: _partial_render(a, {}, colours)))
    return Clause(_rename(head, mapping), _canonical_body(ordered, mapping, colours, {}))


# ─────────────────────────────────────────────
# Lifting
# ─────────────────────────────────────────────

def _lift_atom(atom: Atom, kinds: List[str], schema: Schema,
               variables: Dict[Tuple[str, str], Variable]) -> Atom:
    leaves = typed_leaves(atom, schema)
    replacements = []
    for (leaf, type_name), kind in zip(leaves, kinds):
        if kind == "#" or not isinstance(leaf, Constant):
            replacements.append(leaf)
            continue
        key = (leaf.symbol, type_name)
        if key not in variables:
            variables[key] = Variable(f"V{len(variables)}")
        replacements.append(variables[key])
    it = iter(replacements)
    return map_leaves(atom, lambda _leaf: next(it))


def lift(vertex: "Vertex", modes, schema: Schema) -> Clause:
    """
    Lift a labelled vertex to its canonical clause.

    Args:
        vertex: Vertex with a known label
        modes:  ModeSet or iterable of ModeDeclaration
        schema: Schema the vertex atoms were parsed against

    Raises:
        ValueError: the vertex is unlabelled
        MissingModeError: a body predicate has no matching mode declaration
    """
    if vertex.label is Label.UNKNOWN:
        raise ValueError(f"cannot lift unlabelled vertex {vertex.query.render()}")
    modes = ModeSet.coerce(modes)
    variables: Dict[Tuple[str, str], Variable] = {}

    head = vertex.query.with_negation(vertex.label is Label.NEGATIVE)
    head_mode = modes.find_optional(head.positive())
    head_kinds = (head_mode.markers_for(head.positive()) if head_mode
                  else ["+"] * len(typed_leaves(head, schema)))
    lifted_head = _lift_atom(head, head_kinds, schema, variables)

    body = []
    for atom in sorted(vertex.evidence, key=Atom.render):
        mode = modes.find_optional(atom)
        if mode is None:
            raise MissingModeError(f"no mode declaration matches body atom '{atom.render()}'")
        body.append(_lift_atom(atom, mode.markers_for(atom), schema, variables))

    return canonicalize(lifted_head, body)


def alpha_equivalent(c1: Clause, c2: Clause) -> bool:
    return c1.render() == c2.render()


def opposite(c: Clause) -> Clause:
    """Same body, head negation flipped"""
    return canonicalize(c.head.with_negation(not c.head.negated), c.body)


# ─────────────────────────────────────────────
# Text form
# ─────────────────────────────────────────────

def parse_clause(text: str, schema: Schema) -> Clause:
    """Read a rendered clause back; `_N` leaves become variables"""
    head_text, _, body_text = text.partition(CLAUSE_NECK)
    prefix, node = parse_raw(head_text)
    if prefix == "?":
        raise ParseError(f"clause head cannot be unlabelled: '{text.strip()}'")
    head = build_atom(node, prefix == "!", schema, allow_variables=True)

    body = parse_atoms(body_text, schema, allow_variables=True)
    for atom in body:
        if atom.negated:
            raise ParseError(f"clause body atoms must be positive: '{atom.render()}'")
    return canonicalize(head, body)


def ground_clause(c: Clause) -> Tuple[Atom, Tuple[Atom, ...]]:
    """Replace every variable `_N` by the fresh constant `skN`"""
    def skolem(leaf):
        return Constant(f"{SKOLEM_PREFIX}{leaf.symbol.lstrip('_')}") if isinstance(leaf, Variable) else leaf

    return map_leaves(c.head, skolem), tuple(map_leaves(a, skolem) for a in c.body)


__all__ = [
    "Clause",
    "canonicalize",
    "lift",
    "alpha_equivalent",
    "opposite",
    "parse_clause",
    "ground_clause",
]
