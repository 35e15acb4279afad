# logic/parser.py
"""
Recursive-descent parser for the external atom syntax:

    [!|?]Pred(term, ...)        term := leaf | func(term, ...)

Whitespace between tokens is ignored. Predicate and function symbols are
identifiers; leaves are any run of characters other than whitespace,
parentheses and commas, so numeric constants ("100", "-3.5") parse as
plain constants. Errors report the 0-based character offset.

Schema validation (known symbols, arity, function return types) happens
while building the tree, so a successful parse is well-formed.
"""

import re
from typing import TYPE_CHECKING, List, Optional, Tuple

from errors import ArityError, AtomSyntaxError, ParseError
from logic.terms import Atom, Constant, Function, Term, Variable

if TYPE_CHECKING:
    from logic.declarations import Schema

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LEAF = re.compile(r"[^\s(),]+")
_CANONICAL_VAR = re.compile(r"_\d+")

PREFIXES = ("!", "?")


class _RawNode:
    """Untyped parse tree node; children is None for a leaf"""

    __slots__ = ("symbol", "children", "offset")

    def __init__(self, symbol: str, children: Optional[List["_RawNode"]], offset: int):
        self.symbol = symbol
        self.children = children
        self.offset = offset


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise AtomSyntaxError(f"expected '{char}' but found {found}", self.pos, self.text)
        self.pos += 1

    def match(self, pattern: re.Pattern, what: str) -> Tuple[str, int]:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise AtomSyntaxError(f"expected {what}", self.pos, self.text)
        self.pos = m.end()
        return m.group(0), m.start()

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_node(sc: _Scanner, pattern: re.Pattern, what: str) -> _RawNode:
    symbol, offset = sc.match(pattern, what)
    if sc.peek() != "(":
        return _RawNode(symbol, None, offset)
    if pattern is _LEAF and not _IDENT.fullmatch(symbol):
        raise AtomSyntaxError(f"invalid function symbol '{symbol}'", offset, sc.text)
    sc.expect("(")
    children: List[_RawNode] = []
    if sc.peek() == ")":
        sc.pos += 1
        return _RawNode(symbol, children, offset)
    while True:
        children.append(_parse_node(sc, _LEAF, "a term"))
        nxt = sc.peek()
        if nxt == ",":
            sc.pos += 1
            continue
        if nxt == ")":
            sc.pos += 1
            return _RawNode(symbol, children, offset)
        found = repr(nxt) if nxt else "end of input"
        raise AtomSyntaxError(f"expected ',' or ')' but found {found}", sc.pos, sc.text)


def parse_raw(text: str) -> Tuple[str, _RawNode]:
    """Parse `text` into (prefix, untyped tree); prefix is '', '!' or '?'"""
    sc = _Scanner(text)
    prefix = ""
    if sc.peek() in PREFIXES:
        prefix = sc.text[sc.pos]
        sc.pos += 1
    node = _parse_node(sc, _IDENT, "a predicate symbol")
    if not sc.at_end():
        raise AtomSyntaxError("unexpected trailing text", sc.pos, text)
    return prefix, node


def _build_term(node: _RawNode, expected_type: Optional[str], schema: "Schema",
                allow_variables: bool) -> Term:
    if node.children is None:
        if allow_variables and _CANONICAL_VAR.fullmatch(node.symbol):
            return Variable(node.symbol)
        return Constant(node.symbol)

    arg_types, return_type = schema.function_signature(node.symbol)
    if len(node.children) != len(arg_types):
        raise ArityError(
            f"function '{node.symbol}' expects {len(arg_types)} argument(s), "
            f"got {len(node.children)} (offset {node.offset})"
        )
    if expected_type is not None and return_type != expected_type:
        raise ParseError(
            f"function '{node.symbol}' returns '{return_type}' but position "
            f"expects '{expected_type}' (offset {node.offset})"
        )
    return Function(
        node.symbol,
        tuple(_build_term(c, t, schema, allow_variables) for c, t in zip(node.children, arg_types)),
    )


def build_atom(node: _RawNode, negated: bool, schema: "Schema",
               allow_variables: bool = False) -> Atom:
    """Type-check an untyped tree against the schema and build the Atom"""
    signature = schema.predicate_signature(node.symbol)
    children = node.children or []
    if len(children) != len(signature):
        raise ArityError(
            f"predicate '{node.symbol}' expects {len(signature)} argument(s), got {len(children)}"
        )
    args = tuple(_build_term(c, t, schema, allow_variables) for c, t in zip(children, signature))
    return Atom(node.symbol, args, negated)


def parse_prefixed(text: str, schema: "Schema") -> Tuple[str, Atom]:
    """
    Parse one atom keeping its supervision prefix.

    Returns:
        (prefix, atom) where prefix is '', '!' or '?'. The atom is negated
        only for the '!' prefix.
    """
    prefix, node = parse_raw(text)
    return prefix, build_atom(node, prefix == "!", schema)


def parse_atom(text: str, schema: "Schema") -> Atom:
    """Parse a single (possibly '!'-negated) ground atom"""
    prefix, node = parse_raw(text)
    if prefix == "?":
        raise AtomSyntaxError("'?' prefix is only valid on query atoms in stream files", 0, text)
    return build_atom(node, prefix == "!", schema)


def split_top_level(text: str, separator: str = ",") -> List[str]:
    """Split on separators that are not nested inside parentheses"""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == separator and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def parse_atoms(text: str, schema: "Schema", allow_variables: bool = False) -> List[Atom]:
    """Parse a comma-separated list of atoms"""
    atoms = []
    for part in split_top_level(text):
        prefix, node = parse_raw(part)
        if prefix == "?":
            raise AtomSyntaxError("'?' prefix is not allowed here", 0, part)
        atoms.append(build_atom(node, prefix == "!", schema, allow_variables))
    return atoms


__all__ = [
    "parse_atom",
    "parse_prefixed",
    "parse_atoms",
    "parse_raw",
    "build_atom",
    "split_top_level",
]
