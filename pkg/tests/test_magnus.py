"""Tests for the Magnus-expansion sign oracle.

Expected series below are frozen from hand expansion: for example
``a b a^-1 b^-1`` maps to ``(1+A)(1+B)(1-A+A^2-...)(1-B+B^2-...)`` whose
degree-two truncation multiplies out to ``1 + AB - BA``.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biorders.magnus import (
    CapExceeded,
    EMPTY_MONOMIAL,
    TruncSeries,
    expand,
    format_monomial,
    format_series,
    magnus_sign,
    monomial_concat,
    monomial_degree,
    mul_series,
    series_sign,
)
from biorders.words import FreeProduct, ZLexFactor, free_group

F2 = free_group("a", "b")


def commutator(u, v):
    return F2.multiply(F2.multiply(u, v),
                       F2.multiply(F2.invert(u), F2.invert(v)))


def words_of(max_units=8):
    units = F2.unit_words()
    return st.lists(st.sampled_from(units), max_size=max_units).map(
        lambda ws: F2.normal_form(l for w in ws for l in w.letters))


# ----------------------------------------------------------------------
# monomial packing


def test_monomial_order_is_degree_lexicographic():
    # packed: AA=0b100, AB=0b101, BA=0b110, BB=0b111
    names = {format_monomial(m): m for m in range(4, 8)}
    assert sorted(names) == ["AA", "AB", "BA", "BB"]
    assert names["AA"] < names["AB"] < names["BA"] < names["BB"]
    assert monomial_degree(EMPTY_MONOMIAL) == 0
    assert all(monomial_degree(m) == 2 for m in names.values())


def test_monomial_concat():
    A, B = 0b10, 0b11
    assert format_monomial(monomial_concat(A, B)) == "AB"
    assert monomial_concat(A, EMPTY_MONOMIAL) == A
    assert monomial_concat(EMPTY_MONOMIAL, B) == B
    ab = monomial_concat(A, B)
    assert format_monomial(monomial_concat(ab, A)) == "ABA"


# ----------------------------------------------------------------------
# expansions frozen by hand


def test_expand_generator():
    assert format_series(expand(F2, F2.parse("a"), 3)) == "1 + A"
    assert format_series(expand(F2, F2.parse("b^-1"), 2)) == "1 - B + BB"


def test_expand_inverse_generator():
    assert format_series(expand(F2, F2.parse("a^-1"), 2)) == "1 - A + AA"


def test_expand_commutator_degree_two():
    w = F2.parse("a b a^-1 b^-1")
    assert format_series(expand(F2, w, 2)) == "1 + AB - BA"


def test_expand_nested_commutator_degree_three():
    c2 = commutator(commutator(F2.parse("a"), F2.parse("b")), F2.parse("b"))
    assert format_series(expand(F2, c2, 3)) == "1 + ABB - 2 BAB + BBA"


def test_expand_identity():
    s = expand(F2, F2.identity, 4)
    assert s.terms == {EMPTY_MONOMIAL: 1}
    assert series_sign(s) is None


def test_expand_requires_rank_two_free_group():
    zl = FreeProduct(ZLexFactor("u", "v"))
    with pytest.raises(ValueError):
        expand(zl, zl.parse("u"), 2)
    with pytest.raises(ValueError):
        expand(free_group("a", "b", "c"), F2.identity, 2)


# ----------------------------------------------------------------------
# signs


@pytest.mark.parametrize("text, expected", [
    ("a", 1), ("b", 1), ("a^-1", -1), ("b^-1", -1),
    ("a b a^-1 b^-1", 1), ("b a b^-1 a^-1", -1),
    ("a^-2 b^3", -1), ("a^-1 b", -1), ("e", 0),
])
def test_magnus_sign_examples(text, expected):
    assert magnus_sign(F2, F2.parse(text)) == expected


def test_sign_escalates_past_vanishing_low_degrees():
    c1 = commutator(F2.parse("a"), F2.parse("b"))
    c2 = commutator(c1, F2.parse("b"))
    c3 = commutator(c2, F2.parse("b"))
    assert magnus_sign(F2, c2) == 1
    assert magnus_sign(F2, c3) == 1
    with pytest.raises(CapExceeded):
        magnus_sign(F2, c2, max_cap=2)


def test_sign_total_and_antisymmetric_on_small_ball():
    for w in F2.ball(3):
        s = magnus_sign(F2, w)
        assert (s == 0) == w.is_identity
        assert magnus_sign(F2, F2.invert(w)) == -s


# ----------------------------------------------------------------------
# ring structure


@settings(max_examples=60)
@given(words_of(), words_of())
def test_expand_is_multiplicative(u, v):
    cap = 3
    lhs = expand(F2, F2.multiply(u, v), cap)
    rhs = mul_series(expand(F2, u, cap), expand(F2, v, cap))
    assert lhs == rhs


@settings(max_examples=60)
@given(words_of())
def test_inverse_expansion_cancels(w):
    prod = mul_series(expand(F2, w, 3), expand(F2, F2.invert(w), 3))
    assert prod.terms == {EMPTY_MONOMIAL: 1}


def test_truncation_is_consistent_across_caps():
    w = F2.parse("a b a^-1 b^-1 a^2")
    low, high = expand(F2, w, 2), expand(F2, w, 5)
    for m, c in low.terms.items():
        assert high.coefficient(m) == c
    for m in high.terms:
        if monomial_degree(m) <= 2:
            assert low.coefficient(m) == high.coefficient(m)


def test_format_series_handles_empty():
    assert format_series(TruncSeries(2, {})) == "0"
