# logic/declarations.py
"""
Schema (typed predicate / function signatures) and mode declarations.

Declarations file syntax, one statement per line, '#' starts a comment line:

    type id.
    type time.
    pred HappensAt(event, time).
    pred HoldsAt(fluent, time).
    func walking(id): event.
    func move(id, id): fluent.
    mode 2 HappensAt(walking(+id), +time).
    mode 1 HappensAt(+event, +time).
    query HoldsAt.

Mode placemarkers: '+' input variable, '-' output variable, '#' constant.
A placemarker on a function-typed position applies to every leaf below it;
a nested template (walking(+id)) only matches that function.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

from errors import DeclarationError, MissingModeError, UnknownSymbolError, AtomSyntaxError
from logic.parser import parse_raw, _RawNode
from logic.terms import Atom, Constant, Function, Term

logger = logging.getLogger(__name__)

PLACEMARKERS = {"+": "input", "-": "output", "#": "constant"}


# ─────────────────────────────────────────────
# Schema
# ─────────────────────────────────────────────

class Schema:
    """Predicate and function signatures; immutable once built"""

    def __init__(self, types: Iterable[str],
                 predicates: Dict[str, Tuple[str, ...]],
                 functions: Dict[str, Tuple[Tuple[str, ...], str]]):
        self._types = frozenset(types)
        self._predicates = dict(predicates)
        self._functions = dict(functions)

    @property
    def types(self) -> frozenset:
        return self._types

    @property
    def predicates(self) -> Dict[str, Tuple[str, ...]]:
        return dict(self._predicates)

    @property
    def functions(self) -> Dict[str, Tuple[Tuple[str, ...], str]]:
        return dict(self._functions)

    def predicate_signature(self, name: str) -> Tuple[str, ...]:
        try:
            return self._predicates[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown predicate '{name}'") from None

    def function_signature(self, name: str) -> Tuple[Tuple[str, ...], str]:
        try:
            return self._functions[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown function '{name}'") from None

    def has_predicate(self, name: str) -> bool:
        return name in self._predicates

    def __repr__(self) -> str:
        return (f"Schema(types={sorted(self._types)}, predicates={len(self._predicates)}, "
                f"functions={len(self._functions)})")


def _typed_leaves(term: Term, position_type: str, schema: Schema) -> Iterator[Tuple[Term, str]]:
    if isinstance(term, Function):
        arg_types, _ = schema.function_signature(term.symbol)
        for arg, t in zip(term.args, arg_types):
            yield from _typed_leaves(arg, t, schema)
    else:
        yield term, position_type


def typed_leaves(atom: Atom, schema: Schema) -> List[Tuple[Term, str]]:
    """Every leaf (constant or variable) with the type of its position"""
    signature = schema.predicate_signature(atom.predicate)
    leaves: List[Tuple[Term, str]] = []
    for arg, t in zip(atom.args, signature):
        leaves.extend(_typed_leaves(arg, t, schema))
    return leaves


def typed_constants(atom: Atom, schema: Schema) -> List[Tuple[str, str]]:
    """(constant symbol, position type) for every leaf constant; duplicates kept"""
    return [(leaf.symbol, t) for leaf, t in typed_leaves(atom, schema) if isinstance(leaf, Constant)]


def types_of(atom: Atom, schema: Schema) -> Set[str]:
    """Type names of all leaf constant positions of `atom`"""
    return {t for _, t in typed_constants(atom, schema)}


# ─────────────────────────────────────────────
# Mode declarations
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Placemarker:
    kind: str        # '+', '-' or '#'
    type: str

    def render(self) -> str:
        return f"{self.kind}{self.type}"


@dataclass(frozen=True)
class FunctionTemplate:
    symbol: str
    args: Tuple["ModeNode", ...]

    def render(self) -> str:
        return f"{self.symbol}({','.join(a.render() for a in self.args)})"


ModeNode = Union[Placemarker, FunctionTemplate]


def _node_matches(node: ModeNode, term: Term) -> bool:
    if isinstance(node, Placemarker):
        return True
    if not isinstance(term, Function) or term.symbol != node.symbol or term.arity != len(node.args):
        return False
    return all(_node_matches(n, a) for n, a in zip(node.args, term.args))


def _node_markers(node: ModeNode, term: Term) -> Iterator[str]:
    if isinstance(node, Placemarker):
        for _ in _leaves(term):
            yield node.kind
        return
    for n, a in zip(node.args, term.args):
        yield from _node_markers(n, a)


def _leaves(term: Term) -> Iterator[Term]:
    if isinstance(term, Function):
        for a in term.args:
            yield from _leaves(a)
    else:
        yield term


@dataclass(frozen=True)
class ModeDeclaration:
    predicate: str
    recall: int
    template: Tuple[ModeNode, ...]

    def matches(self, atom: Atom) -> bool:
        return (atom.predicate == self.predicate
                and atom.arity == len(self.template)
                and all(_node_matches(n, a) for n, a in zip(self.template, atom.args)))

    def markers_for(self, atom: Atom) -> List[str]:
        """Placemarker kind for every leaf of `atom` (same order as typed_leaves)"""
        if not self.matches(atom):
            raise MissingModeError(f"mode '{self.render()}' does not match '{atom.render()}'")
        kinds: List[str] = []
        for node, arg in zip(self.template, atom.args):
            kinds.extend(_node_markers(node, arg))
        return kinds

    def render(self) -> str:
        return f"mode {self.recall} {self.predicate}({','.join(n.render() for n in self.template)})"


class ModeSet:
    """Mode declarations indexed by predicate"""

    def __init__(self, modes: Iterable[ModeDeclaration] = ()):
        self._by_predicate: Dict[str, List[ModeDeclaration]] = {}
        for mode in modes:
            self._by_predicate.setdefault(mode.predicate, []).append(mode)

    @classmethod
    def coerce(cls, modes: Union["ModeSet", Iterable[ModeDeclaration]]) -> "ModeSet":
        return modes if isinstance(modes, ModeSet) else cls(modes)

    def __iter__(self) -> Iterator[ModeDeclaration]:
        for modes in self._by_predicate.values():
            yield from modes

    def __len__(self) -> int:
        return sum(len(m) for m in self._by_predicate.values())

    def has(self, predicate: str) -> bool:
        return predicate in self._by_predicate

    def recall(self, predicate: str) -> int:
        """Largest recall declared for `predicate`; 0 when none is declared"""
        return max((m.recall for m in self._by_predicate.get(predicate, ())), default=0)

    def find(self, atom: Atom) -> ModeDeclaration:
        """First declaration whose template matches `atom`"""
        for mode in self._by_predicate.get(atom.predicate, ()):
            if mode.matches(atom):
                return mode
        raise MissingModeError(f"no mode declaration matches '{atom.render()}'")

    def find_optional(self, atom: Atom) -> Optional[ModeDeclaration]:
        try:
            return self.find(atom)
        except MissingModeError:
            return None


# ─────────────────────────────────────────────
# Declarations file
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Declarations:
    schema: Schema
    modes: ModeSet
    query_predicate: Optional[str] = None


_TYPE_RE = re.compile(r"type\s+([A-Za-z_]\w*)\s*\.$")
_PRED_RE = re.compile(r"pred\s+([A-Za-z_]\w*)\s*(?:\((.*)\))?\s*\.$")
_FUNC_RE = re.compile(r"func\s+([A-Za-z_]\w*)\s*\((.*)\)\s*:\s*([A-Za-z_]\w*)\s*\.$")
_MODE_RE = re.compile(r"mode\s+(\d+)\s+(.+?)\s*\.$")
_QUERY_RE = re.compile(r"query\s+([A-Za-z_]\w*)\s*\.$")
_TYPE_NAME = re.compile(r"[A-Za-z_]\w*")


def _type_list(raw: Optional[str], where: str) -> Tuple[str, ...]:
    if raw is None or not raw.strip():
        return ()
    names = tuple(p.strip() for p in raw.split(","))
    for name in names:
        if not _TYPE_NAME.fullmatch(name):
            raise DeclarationError(f"{where}: invalid type name '{name}'")
    return names


def _build_template(node: _RawNode, expected_type: str, schema: Schema, where: str) -> ModeNode:
    if node.children is None:
        kind, type_name = node.symbol[:1], node.symbol[1:]
        if kind not in PLACEMARKERS or not type_name:
            raise DeclarationError(f"{where}: invalid placemarker '{node.symbol}'")
        if type_name != expected_type:
            raise DeclarationError(
                f"{where}: placemarker '{node.symbol}' at a position of type '{expected_type}'"
            )
        return Placemarker(kind, type_name)

    try:
        arg_types, return_type = schema.function_signature(node.symbol)
    except UnknownSymbolError as e:
        raise DeclarationError(f"{where}: {e}") from None
    if return_type != expected_type:
        raise DeclarationError(
            f"{where}: function '{node.symbol}' returns '{return_type}', expected '{expected_type}'"
        )
    if len(node.children) != len(arg_types):
        raise DeclarationError(f"{where}: function '{node.symbol}' expects {len(arg_types)} argument(s)")
    return FunctionTemplate(
        node.symbol,
        tuple(_build_template(c, t, schema, where) for c, t in zip(node.children, arg_types)),
    )


def parse_declarations(text: str, source: str = "<declarations>") -> Declarations:
    """
    Parse a declarations file into schema, modes and the default query predicate.

    Raises:
        DeclarationError with the offending line number
    """
    types: Set[str] = set()
    predicates: Dict[str, Tuple[str, ...]] = {}
    functions: Dict[str, Tuple[Tuple[str, ...], str]] = {}
    raw_modes: List[Tuple[str, int, str]] = []
    query_predicate = None

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{line_no}"

        if m := _TYPE_RE.match(line):
            types.add(m.group(1))
        elif m := _PRED_RE.match(line):
            if m.group(1) in predicates:
                raise DeclarationError(f"{where}: predicate '{m.group(1)}' declared twice")
            predicates[m.group(1)] = _type_list(m.group(2), where)
        elif m := _FUNC_RE.match(line):
            if m.group(1) in functions:
                raise DeclarationError(f"{where}: function '{m.group(1)}' declared twice")
            functions[m.group(1)] = (_type_list(m.group(2), where), m.group(3))
            if not functions[m.group(1)][0]:
                raise DeclarationError(f"{where}: function '{m.group(1)}' needs at least one argument")
        elif m := _MODE_RE.match(line):
            raw_modes.append((where, int(m.group(1)), m.group(2)))
        elif m := _QUERY_RE.match(line):
            query_predicate = m.group(1)
        else:
            raise DeclarationError(f"{where}: cannot parse '{line}'")

    known_types = types | {ret for _, ret in functions.values()}
    for name, signature in predicates.items():
        for t in signature:
            if t not in known_types:
                raise DeclarationError(f"predicate '{name}' uses undeclared type '{t}'")
    for name, (arg_types, _) in functions.items():
        for t in arg_types:
            if t not in known_types:
                raise DeclarationError(f"function '{name}' uses undeclared type '{t}'")

    schema = Schema(known_types, predicates, functions)

    modes: List[ModeDeclaration] = []
    for where, recall, template_text in raw_modes:
        try:
            _, node = parse_raw(template_text)
        except AtomSyntaxError as e:
            raise DeclarationError(f"{where}: {e}") from None
        if node.symbol not in predicates:
            raise DeclarationError(f"{where}: mode for undeclared predicate '{node.symbol}'")
        signature = predicates[node.symbol]
        children = node.children or []
        if len(children) != len(signature):
            raise DeclarationError(
                f"{where}: mode for '{node.symbol}' has {len(children)} argument(s), "
                f"signature has {len(signature)}"
            )
        template = tuple(_build_template(c, t, schema, where) for c, t in zip(children, signature))
        modes.append(ModeDeclaration(node.symbol, recall, template))

    if query_predicate is not None and query_predicate not in predicates:
        raise DeclarationError(f"query predicate '{query_predicate}' is not declared")

    logger.debug(
        f"Declarations from {source}: {len(types)} types, {len(predicates)} predicates, "
        f"{len(functions)} functions, {len(modes)} modes"
    )
    return Declarations(schema, ModeSet(modes), query_predicate)


def load_declarations(path: str, encoding: str = "utf-8") -> Declarations:
    with open(path, "r", encoding=encoding) as f:
        return parse_declarations(f.read(), source=path)


__all__ = [
    "Schema",
    "Placemarker",
    "FunctionTemplate",
    "ModeDeclaration",
    "ModeSet",
    "Declarations",
    "parse_declarations",
    "load_declarations",
    "types_of",
    "typed_constants",
    "typed_leaves",
]
