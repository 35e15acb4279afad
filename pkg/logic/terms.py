# logic/terms.py
"""
Immutable parse trees for first-order expressions.

    Term  = Constant | Variable | Function
    Atom  = predicate over a tuple of terms, optionally negated

Ground input never contains Variable; variables only appear in lifted
clauses (see logic/clauses.py). All values are frozen and hashable so
they can be shared between threads and used as dict/set keys.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Tuple, Union


@dataclass(frozen=True)
class Constant:
    symbol: str

    @property
    def arity(self) -> int:
        return 0

    def render(self) -> str:
        return self.symbol

    def is_ground(self) -> bool:
        return True


@dataclass(frozen=True)
class Variable:
    symbol: str

    @property
    def arity(self) -> int:
        return 0

    def render(self) -> str:
        return self.symbol

    def is_ground(self) -> bool:
        return False


@dataclass(frozen=True)
class Function:
    symbol: str
    args: Tuple["Term", ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"Function '{self.symbol}' needs at least one argument")

    @property
    def arity(self) -> int:
        return len(self.args)

    def render(self) -> str:
        return f"{self.symbol}({','.join(a.render() for a in self.args)})"

    def is_ground(self) -> bool:
        return all(a.is_ground() for a in self.args)


Term = Union[Constant, Variable, Function]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: Tuple[Term, ...] = ()
    negated: bool = False

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def symbol(self) -> str:
        return self.predicate

    def render(self) -> str:
        prefix = "!" if self.negated else ""
        if not self.args:
            return f"{prefix}{self.predicate}"
        return f"{prefix}{self.predicate}({','.join(a.render() for a in self.args)})"

    def is_ground(self) -> bool:
        return all(a.is_ground() for a in self.args)

    def positive(self) -> "Atom":
        return self if not self.negated else Atom(self.predicate, self.args, False)

    def with_negation(self, negated: bool) -> "Atom":
        return self if self.negated == negated else Atom(self.predicate, self.args, negated)

    def __str__(self) -> str:
        return self.render()


class Label(Enum):
    """Supervision state of a query atom"""

    POSITIVE = 1
    NEGATIVE = -1
    UNKNOWN = 0

    @property
    def sign(self) -> int:
        return self.value

    @property
    def is_known(self) -> bool:
        return self is not Label.UNKNOWN

    @property
    def prefix(self) -> str:
        return {Label.POSITIVE: "", Label.NEGATIVE: "!", Label.UNKNOWN: "?"}[self]

    @classmethod
    def from_sign(cls, sign: int) -> "Label":
        return cls.POSITIVE if sign > 0 else cls.NEGATIVE


def iter_leaves(term: Union[Term, Atom]) -> Iterator[Union[Constant, Variable]]:
    """Depth-first, left-to-right leaves of a term or atom"""
    if isinstance(term, (Constant, Variable)):
        yield term
        return
    for arg in term.args:
        yield from iter_leaves(arg)


def map_leaves(term: Union[Term, Atom], fn) -> Union[Term, Atom]:
    """Rebuild `term` with every leaf replaced by fn(leaf)"""
    if isinstance(term, (Constant, Variable)):
        return fn(term)
    new_args = tuple(map_leaves(a, fn) for a in term.args)
    if isinstance(term, Function):
        return Function(term.symbol, new_args)
    return Atom(term.predicate, new_args, term.negated)
