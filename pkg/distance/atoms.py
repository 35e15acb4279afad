# distance/atoms.py
"""
Structural distance between ground expressions.

    d(e, e)                      = 0
    d(p(s1..sk), q(t1..tr))      = 1                 p != q or k != r
    d(p(s1..sk), p(t1..tk))      = (1/2k) * sum d(si, ti)

Constants compare by symbol. A negated atom is treated as a distinct
predicate, so it is at distance 1 from any non-negated atom.
"""

from functools import lru_cache
from typing import Union

from logic.terms import Atom, Term

Expression = Union[Atom, Term]


@lru_cache(maxsize=100_000)
def atom_distance(a: Expression, b: Expression) -> float:
    """Distance in [0, 1] between two ground atoms or terms"""
    if a == b:
        return 0.0

    if isinstance(a, Atom) or isinstance(b, Atom):
        if not (isinstance(a, Atom) and isinstance(b, Atom)):
            return 1.0
        if a.negated != b.negated:
            return 1.0
    elif type(a) is not type(b):
        return 1.0

    if a.symbol != b.symbol or a.arity != b.arity or a.arity == 0:
        return 1.0

    k = a.arity
    return sum(atom_distance(s, t) for s, t in zip(a.args, b.args)) / (2 * k)


__all__ = ["atom_distance", "Expression"]
