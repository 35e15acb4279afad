# tests/test_logic.py
import time
from itertools import permutations

import numpy as np
import pytest

from errors import ArityError, AtomSyntaxError, DeclarationError, MissingModeError, UnknownSymbolError
from logic import (
    Atom,
    Constant,
    Function,
    Label,
    parse_atom,
    parse_declarations,
    typed_constants,
    types_of,
)
from logic.clauses import alpha_equivalent, canonicalize, ground_clause, lift, opposite, parse_clause
from logic.declarations import ModeSet
from logic.parser import parse_prefixed
from logic.terms import Variable
from completion.partition import Vertex


# ── Parsing ──────────────────────────────────────────────────────────────────

def test_parse_nested_atom(atom):
    assert atom("HappensAt(walking(ID1), 100)") == Atom(
        "HappensAt", (Function("walking", (Constant("ID1"),)), Constant("100")), False
    )


def test_parse_negated_atom(atom):
    parsed = atom("!HoldsAt(move(ID1,ID2), 200)")
    assert parsed.negated
    assert parsed.positive() == atom("HoldsAt(move(ID1,ID2),200)")


def test_unbalanced_parenthesis_reports_offset(schema):
    with pytest.raises(AtomSyntaxError) as info:
        parse_atom("HappensAt(walking(ID1)", schema)
    assert info.value.offset == 22


def test_unknown_predicate_and_arity(schema):
    with pytest.raises(UnknownSymbolError):
        parse_atom("Running(ID1)", schema)
    with pytest.raises(ArityError):
        parse_atom("Person(ID1, ID2)", schema)
    with pytest.raises(ArityError):
        parse_atom("HappensAt(walking(ID1, ID2), 5)", schema)


def test_prefixes(schema):
    assert parse_prefixed("?HoldsAt(move(ID1,ID2),150)", schema)[0] == "?"
    assert parse_prefixed("HoldsAt(move(ID1,ID2),150)", schema)[0] == ""
    with pytest.raises(AtomSyntaxError):
        parse_atom("?HoldsAt(move(ID1,ID2),150)", schema)


@pytest.mark.parametrize("text", [
    "HappensAt(walking(ID1),100)",
    "!HoldsAt(move(ID1,ID2),200)",
    "Close(ID1,ID2,34,5)",
    "Alarm",
])
def test_parse_render_parse_is_identity(atom, text):
    parsed = atom(text)
    assert parsed.render() == text
    assert atom(parsed.render()) == parsed


# ── Types ────────────────────────────────────────────────────────────────────

def test_types_of(atom, schema):
    assert types_of(atom("HoldsAt(move(ID1,ID2),100)"), schema) == {"id", "time"}
    assert types_of(atom("Close(ID1,ID2,34,5)"), schema) == {"id", "dist", "time"}
    assert types_of(atom("Alarm"), schema) == set()


def test_typed_constants_keep_duplicates(atom, schema):
    assert typed_constants(atom("HappensAt(walking(ID1),100)"), schema) == [("ID1", "id"), ("100", "time")]
    assert typed_constants(atom("HoldsAt(move(ID1,ID2),100)"), schema) == [
        ("ID1", "id"), ("ID2", "id"), ("100", "time"),
    ]
    assert typed_constants(atom("Close(ID1,ID1,24,100)"), schema).count(("ID1", "id")) == 2


# ── Declarations ─────────────────────────────────────────────────────────────

def test_declarations_summary(declarations):
    assert declarations.query_predicate == "HoldsAt"
    assert {"id", "time", "dist", "event", "fluent"} <= declarations.schema.types
    assert declarations.modes.recall("HappensAt") == 1
    assert declarations.modes.recall("Noise") == 0


def test_recall_is_max_over_modes():
    decl = parse_declarations(
        "type id.\ntype time.\npred HappensAt(event, time).\nfunc walking(id): event.\n"
        "mode 1 HappensAt(+event, +time).\nmode 3 HappensAt(walking(+id), #time).\n"
    )
    assert decl.modes.recall("HappensAt") == 3
    assert len(decl.modes) == 2


def test_first_matching_mode_wins(atom, schema):
    decl = parse_declarations(
        "type id.\ntype time.\npred HappensAt(event, time).\nfunc walking(id): event.\n"
        "func exit(id): event.\nmode 2 HappensAt(walking(+id), #time).\nmode 1 HappensAt(+event, +time).\n"
    )
    walking = atom("HappensAt(walking(ID1),100)")
    exiting = atom("HappensAt(exit(ID1),100)")
    assert decl.modes.find(walking).markers_for(walking) == ["+", "#"]
    assert decl.modes.find(exiting).markers_for(exiting) == ["+", "+"]


@pytest.mark.parametrize("text", [
    "type id.\npred P(id).\nmode 1 P(+time).\n",
    "type id.\npred P(nope).\n",
    "type id.\npred P(id).\npred P(id).\n",
    "type id.\npred P(id).\nmode 1 Q(+id).\n",
    "type id.\npred P(id).\nquery Q.\n",
    "this is not a statement\n",
])
def test_bad_declarations(text):
    with pytest.raises(DeclarationError):
        parse_declarations(text)


# ── Clauses ──────────────────────────────────────────────────────────────────

def _vertex(atom, query, label, *evidence):
    return Vertex(atom(query), label, frozenset(atom(e) for e in evidence))


def test_lift_negative_example(atom, schema, modes):
    v = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.NEGATIVE,
                "HappensAt(exit(ID1),100)", "HappensAt(walking(ID2),100)")
    clause = lift(v, modes, schema)
    assert clause.render() == (
        "!HoldsAt(move(_1,_2),_3) :- HappensAt(exit(_1),_3), HappensAt(walking(_2),_3)"
    )
    assert opposite(clause).render() == (
        "HoldsAt(move(_1,_2),_3) :- HappensAt(exit(_1),_3), HappensAt(walking(_2),_3)"
    )


def test_lift_is_invariant_under_renaming(atom, schema, modes):
    v1 = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE,
                 "HappensAt(walking(ID1),100)", "HappensAt(walking(ID2),100)", "Close(ID1,ID2,24,100)")
    v2 = _vertex(atom, "HoldsAt(move(ID7,ID3),480)", Label.POSITIVE,
                 "HappensAt(walking(ID7),480)", "HappensAt(walking(ID3),480)", "Close(ID7,ID3,24,480)")
    assert lift(v1, modes, schema) == lift(v2, modes, schema)


def test_lift_keeps_constant_positions(atom, schema, modes):
    v1 = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE, "Close(ID1,ID2,24,100)")
    v2 = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE, "Close(ID1,ID2,12,100)")
    c1 = lift(v1, modes, schema)
    assert "24" in c1.render()
    assert c1 != lift(v2, modes, schema)


def test_unit_clause(atom, schema, modes):
    clause = lift(_vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE), modes, schema)
    assert clause.render() == "HoldsAt(move(_1,_2),_3)"
    assert opposite(clause).render() == "!HoldsAt(move(_1,_2),_3)"


def test_lift_rejects_unlabelled_and_unmoded(atom, schema, modes):
    with pytest.raises(ValueError):
        lift(_vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.UNKNOWN), modes, schema)
    with pytest.raises(MissingModeError):
        lift(_vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE, "Noise(ID1)"), modes, schema)


def test_alpha_equivalence_and_opposite(atom, schema, modes):
    v = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE,
                "HappensAt(walking(ID1),100)", "Person(ID2)")
    c = lift(v, modes, schema)
    assert alpha_equivalent(c, c)
    assert not alpha_equivalent(c, opposite(c))
    assert opposite(opposite(c)) == c

    renamed = canonicalize(
        Atom("HoldsAt", (Function("move", (Variable("A"), Variable("B"))), Variable("T"))),
        [Atom("Person", (Variable("B"),)),
         Atom("HappensAt", (Function("walking", (Variable("A"),)), Variable("T")))],
    )
    assert alpha_equivalent(c, renamed)


def test_canonical_body_is_order_insensitive():
    x, y, t = Variable("X"), Variable("Y"), Variable("T")
    head = Atom("HoldsAt", (Function("move", (x, y)), t))
    b1 = Atom("HappensAt", (Function("walking", (x,)), t))
    b2 = Atom("HappensAt", (Function("walking", (y,)), t))
    assert canonicalize(head, [b1, b2]) == canonicalize(head, [b2, b1])


def test_parse_clause_and_ground(atom, schema, modes):
    c = lift(_vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.NEGATIVE, "Close(ID1,ID2,18,100)"),
             modes, schema)
    assert parse_clause(c.render(), schema) == c
    head, body = ground_clause(c)
    assert head.render() == "!HoldsAt(move(sk1,sk2),sk3)"
    assert [a.render() for a in body] == ["Close(sk1,sk2,18,sk3)"]


def test_lift_accepts_plain_mode_list(atom, schema, modes):
    v = _vertex(atom, "HoldsAt(move(ID1,ID2),100)", Label.POSITIVE, "Person(ID1)")
    assert lift(v, list(modes), schema) == lift(v, ModeSet(modes), schema)


# ── Canonical form under symmetry ────────────────────────────────────────────

VARIABLE_DISTANCE = """\
type id.
type time.
type dist.
pred Close(id, id, dist, time).
pred HoldsAt(fluent, time).
func move(id, id): fluent.
mode 1 Close(+id, +id, +dist, +time).
mode 1 HoldsAt(move(+id, +id), +time).
query HoldsAt.
"""


def test_many_interchangeable_body_atoms_canonicalize_quickly():
    d = parse_declarations(VARIABLE_DISTANCE, source="<tests>")
    n = 14
    vertex = Vertex(parse_atom("HoldsAt(move(ID1,ID2),5)", d.schema), Label.POSITIVE,
                    frozenset(parse_atom(f"Close(ID1,ID2,{10 + i},5)", d.schema) for i in range(n)))
    started = time.perf_counter()
    clause = lift(vertex, d.modes, d.schema)
    assert time.perf_counter() - started < 2.0

    expected = ", ".join(f"Close(_1,_2,_{i},_3)" for i in range(4, 4 + n))
    assert clause.render() == f"HoldsAt(move(_1,_2),_3) :- {expected}"
    assert parse_clause(clause.render(), d.schema) == clause

    shuffled = Vertex(parse_atom("HoldsAt(move(ID7,ID3),80)", d.schema), Label.POSITIVE,
                      frozenset(parse_atom(f"Close(ID7,ID3,{90 - 3 * i},80)", d.schema) for i in range(n)))
    assert lift(shuffled, d.modes, d.schema) == clause


def _link(a, b):
    return Atom("Link", (Variable(a), Variable(b)))


def _undirected(edges):
    return [atom for a, b in edges for atom in (_link(a, b), _link(b, a))]


def _renamed(atoms, names):
    return [Atom(a.predicate, tuple(Variable(names[v.symbol]) for v in a.args)) for a in atoms]


def test_colour_ties_without_symmetry_stay_apart():
    head = Atom("Alarm", ())
    ring = _undirected([("A", "B"), ("B", "C"), ("C", "D"), ("D", "E"), ("E", "F"), ("F", "A")])
    triangles = _undirected([("A", "B"), ("B", "C"), ("C", "A"), ("D", "E"), ("E", "F"), ("F", "D")])
    c_ring, c_triangles = canonicalize(head, ring), canonicalize(head, triangles)
    assert not alpha_equivalent(c_ring, c_triangles)

    names = dict(zip("ABCDEF", "QZMRXK"))
    rng = np.random.default_rng(3)
    for atoms, expected in ((ring, c_ring), (triangles, c_triangles)):
        moved = _renamed(atoms, names)
        for _ in range(5):
            order = rng.permutation(len(moved))
            assert canonicalize(head, [moved[i] for i in order]) == expected


def _random_clause(rng):
    names = ["V0", "V1", "V2", "V3"]
    head = Atom("Goal", (Variable(str(rng.choice(names))),))
    body = []
    for _ in range(int(rng.integers(2, 6))):
        if rng.random() < 0.6:
            body.append(_link(str(rng.choice(names)), str(rng.choice(names))))
        else:
            body.append(Atom("Mark", (Variable(str(rng.choice(names))),)))
    return head, body


def _is_renaming(c1, c2):
    names = ["V0", "V1", "V2", "V3"]
    h1, b1 = c1
    h2, b2 = c2
    for perm in permutations(names):
        table = dict(zip(names, perm))
        if _renamed([h1], table)[0] == h2 and set(_renamed(b1, table)) == set(b2):
            return True
    return False


def test_alpha_equivalence_is_an_equivalence_relation():
    rng = np.random.default_rng(11)
    raw = []
    for _ in range(12):
        head, body = _random_clause(rng)
        raw.append((head, body))
        perm = rng.permutation(4)
        table = {f"V{i}": f"V{int(perm[i])}" for i in range(4)}
        moved = _renamed(body, table)
        raw.append((_renamed([head], table)[0], [moved[i] for i in rng.permutation(len(moved))]))

    clauses = [canonicalize(h, b) for h, b in raw]
    for i in range(0, len(clauses), 2):
        assert alpha_equivalent(clauses[i], clauses[i + 1])

    for a, ca in zip(raw, clauses):
        assert alpha_equivalent(ca, ca)
        for b, cb in zip(raw, clauses):
            assert alpha_equivalent(ca, cb) == alpha_equivalent(cb, ca)
            assert alpha_equivalent(ca, cb) == _is_renaming(a, b)
            for cc in clauses:
                if alpha_equivalent(ca, cb) and alpha_equivalent(cb, cc):
                    assert alpha_equivalent(ca, cc)
