import random

import pytest
from hypothesis import given, settings, strategies as st

from curvegraph.errors import PreconditionError, TrivialClass
from curvegraph.words import (canonical_class, cyclic_reduce, dehn_reduce, free_reduce,
                              homology_vector, inverse, is_identity, relator)


def letters(g):
    return st.sampled_from([s * i for i in range(1, 2 * g + 1) for s in (1, -1)])


def words(g, lo=1, hi=12):
    return st.lists(letters(g), min_size=lo, max_size=hi).map(tuple)


def test_free_reduce():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert free_reduce(()) == ()


def test_cyclic_reduce():
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)


def test_relator_is_identity():
    for g in (2, 3, 4):
        assert is_identity(relator(g), g)
        assert dehn_reduce(relator(g), g) == ()


def test_trivial_class_raises():
    with pytest.raises(TrivialClass):
        canonical_class(relator(2), 2)
    with pytest.raises(TrivialClass):
        canonical_class((1, -1), 2)


def test_letter_out_of_range():
    with pytest.raises(PreconditionError):
        canonical_class((5,), 2)


def test_half_relator_swap():
    # a1 b1 a1^-1 b1^-1 = (a2 b2 a2^-1 b2^-1)^-1 in genus 2
    assert canonical_class((1, 2, -1, -2), 2) == canonical_class((4, 3, -4, -3), 2)


def test_inverse_same_class():
    assert canonical_class((1, 2), 2) == canonical_class((-2, -1), 2)


def test_distinct_classes():
    assert canonical_class((1,), 2) != canonical_class((2,), 2)
    assert canonical_class((1, 1, 2), 2) != canonical_class((1, 2, 2), 2)


@settings(max_examples=150, deadline=None)
@given(words(2), words(2, 0, 6))
def test_conjugation_invariance(w, u):
    try:
        c = canonical_class(w, 2)
    except TrivialClass:
        return
    assert canonical_class(u + w + inverse(u), 2) == c


@settings(max_examples=150, deadline=None)
@given(words(2))
def test_idempotent_and_inversion(w):
    try:
        c = canonical_class(w, 2)
    except TrivialClass:
        return
    assert canonical_class(c.word, 2) == c
    assert canonical_class(inverse(w), 2) == c


@settings(max_examples=100, deadline=None)
@given(words(2))
def test_homology_invariant_up_to_sign(w):
    try:
        c = canonical_class(w, 2)
    except TrivialClass:
        return
    v = homology_vector(w, 2)
    assert c.homology in (v, tuple(-x for x in v))


@settings(max_examples=60, deadline=None)
@given(words(3, 1, 10), st.integers(0, 13))
def test_relator_insertion_genus3(w, pos):
    try:
        c = canonical_class(w, 3)
    except TrivialClass:
        return
    pos %= len(w) + 1
    assert canonical_class(w[:pos] + relator(3) + w[pos:], 3) == c
