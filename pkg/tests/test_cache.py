# tests/test_cache.py
import math
from itertools import permutations

import pytest

from completion.cache import LabelCache, filter_cache, hoeffding_epsilon, update_cache
from completion.partition import Vertex
from logic.clauses import lift, opposite
from logic.terms import Label


def test_hoeffding_values():
    assert hoeffding_epsilon(10, 0.05) == pytest.approx(0.42949, abs=1e-4)
    assert hoeffding_epsilon(3, 2 * math.exp(-6)) == pytest.approx(1.0, abs=1e-12)
    margins = [hoeffding_epsilon(n, 0.05) for n in (1, 10, 100, 1000)]
    assert margins == sorted(margins, reverse=True)


@pytest.mark.parametrize("n, delta", [(0, 0.05), (10, 0.0), (10, 1.0)])
def test_hoeffding_rejects_bad_arguments(n, delta):
    with pytest.raises(ValueError):
        hoeffding_epsilon(n, delta)


@pytest.fixture
def contradiction(atom, modes, schema):
    """A positive and a negative vertex with the same evidence, and their clauses"""
    evidence = frozenset([atom("HappensAt(walking(ID1),40)"), atom("HappensAt(walking(ID2),40)")])
    positive = Vertex(atom("HoldsAt(move(ID1,ID2),40)"), Label.POSITIVE, evidence)
    negative = Vertex(atom("HoldsAt(move(ID1,ID2),40)"), Label.NEGATIVE, evidence)
    clause = lift(positive, modes, schema)
    assert lift(negative, modes, schema) == opposite(clause)
    return positive, negative, clause, opposite(clause)


def test_majority_wins_when_gap_exceeds_margin(contradiction):
    positive, negative, c, c_neg = contradiction
    cache = LabelCache()
    cache.observe(c, positive, 9)
    cache.observe(c_neg, negative, 1)
    result = filter_cache(cache, 0.05)
    assert result.kept == [positive]
    assert result.dropped == [c_neg]
    assert result.contradictions == 1


def test_balanced_contradiction_keeps_both(contradiction):
    positive, negative, c, c_neg = contradiction
    cache = LabelCache()
    cache.observe(c, positive, 5)
    cache.observe(c_neg, negative, 5)
    result = filter_cache(cache, 0.05)
    assert result.kept == [positive, negative]
    assert result.dropped == []


def test_decision_is_reversible(contradiction):
    positive, negative, c, c_neg = contradiction
    cache = LabelCache()
    cache.observe(c, positive, 1)
    cache.observe(c_neg, negative, 9)
    assert filter_cache(cache, 0.05).kept == [negative]

    cache.observe(c, positive, 16)
    assert filter_cache(cache, 0.05).kept == [positive]


def test_delta_controls_aggressiveness(contradiction):
    positive, negative, c, c_neg = contradiction
    cache = LabelCache()
    cache.observe(c, positive, 3)
    cache.observe(c_neg, negative, 1)
    assert len(filter_cache(cache, 1e-6).kept) == 2
    assert filter_cache(cache, 0.9).kept == [positive]


def test_clause_without_opposite_is_always_kept(contradiction):
    positive, _, c, _ = contradiction
    cache = LabelCache()
    cache.observe(c, positive)
    result = filter_cache(cache, 0.05)
    assert result.kept == [positive]
    assert result.contradictions == 0


def test_representative_is_smallest_rendering(atom, modes, schema):
    first = Vertex(atom("HoldsAt(move(ID1,ID2),40)"), Label.POSITIVE,
                   frozenset([atom("Person(ID1)")]))
    second = Vertex(atom("HoldsAt(move(ID3,ID4),80)"), Label.POSITIVE,
                    frozenset([atom("Person(ID3)")]))
    cache = LabelCache()
    update_cache(cache, [second, first], modes, schema)
    assert len(cache) == 1
    (clause, entry), = list(cache)
    assert entry.representative == first
    assert entry.count == 2
    assert cache.total_count() == 2
    assert clause in cache
    with pytest.raises(ValueError):
        cache.observe(clause, first, 0)

    later = Vertex(atom("HoldsAt(move(ID0,ID1),0)"), Label.POSITIVE, frozenset([atom("Person(ID0)")]))
    update_cache(cache, [later], modes, schema)
    assert cache.get(clause).representative == first
    assert cache.get(clause).count == 3


def _snapshot(cache):
    return [(clause.render(), entry.representative, entry.count) for clause, entry in cache]


def test_update_is_invariant_to_order_within_batch(atom, modes, schema):
    batch = [
        Vertex(atom("HoldsAt(move(ID1,ID2),40)"), Label.POSITIVE, frozenset([atom("Person(ID1)")])),
        Vertex(atom("HoldsAt(move(ID2,ID1),40)"), Label.POSITIVE, frozenset([atom("Person(ID2)")])),
        Vertex(atom("HoldsAt(move(ID1,ID2),80)"), Label.NEGATIVE,
               frozenset([atom("HappensAt(walking(ID1),80)")])),
        Vertex(atom("HoldsAt(move(ID2,ID1),80)"), Label.NEGATIVE,
               frozenset([atom("HappensAt(walking(ID2),80)")])),
        Vertex(atom("HoldsAt(move(ID1,ID2),120)"), Label.POSITIVE, frozenset()),
    ]
    expected = None
    for order in permutations(batch):
        cache = LabelCache()
        update_cache(cache, list(order), modes, schema)
        if expected is None:
            expected = _snapshot(cache)
        assert _snapshot(cache) == expected
    assert sorted(count for _, _, count in expected) == [1, 2, 2]
    assert sum(count for _, _, count in expected) == len(batch)


@pytest.mark.parametrize("n_pos, n_neg", [(9, 1), (1, 9), (5, 5), (3, 1), (12, 4), (7, 0)])
def test_filter_is_symmetric_under_sign_swap(contradiction, n_pos, n_neg):
    positive, negative, c, c_neg = contradiction

    def run(pos_count, neg_count):
        cache = LabelCache()
        if pos_count:
            cache.observe(c, positive, pos_count)
        if neg_count:
            cache.observe(c_neg, negative, neg_count)
        return filter_cache(cache, 0.05)

    straight, swapped = run(n_pos, n_neg), run(n_neg, n_pos)
    assert (positive in straight.kept) == (negative in swapped.kept)
    assert (negative in straight.kept) == (positive in swapped.kept)
    assert len(straight.dropped) == len(swapped.dropped)
    assert straight.contradictions == swapped.contradictions
