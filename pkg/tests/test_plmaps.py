"""Tests for exact piecewise-linear homeomorphisms."""

from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biorders.plmaps import (
    IDENTITY,
    InvalidPLMap,
    InvalidTau,
    PLMap,
    format_plmap,
    make_tau,
    parse_plmap,
    perturb,
    random_bump,
    sign,
)

F = Fraction

# the basic one-bump map: translation by 1/2 far left, fixed from 0 on
G0 = PLMap.from_points([(-1, F(-1, 2)), (0, 0)])


def fractions(lo=-8, hi=8):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=16)


@st.composite
def plmaps(draw):
    """Random maps from jointly increasing breakpoint chains."""
    n = draw(st.integers(0, 4))
    if n == 0:
        return IDENTITY
    x = draw(fractions())
    y = draw(fractions())
    pts = []
    for _ in range(n):
        x += draw(fractions(F(1, 4), 3))
        y += draw(fractions(F(1, 4), 3))
        pts.append((x, y))
    top = max(x, y) + 1
    pts.append((top, top))
    return PLMap.from_points(pts)


# ----------------------------------------------------------------------
# construction and canonical form


def test_identity_is_empty():
    assert IDENTITY.is_identity
    assert IDENTITY(5) == 5
    assert IDENTITY.critical_point() is None
    assert PLMap.from_points([(3, 3)]) == IDENTITY
    assert PLMap.from_points([(0, 0), (1, 1)]) == IDENTITY


def test_collinear_points_are_dropped():
    f = PLMap.from_points([(-2, -1), (-1, F(-1, 2)), (0, 0)])
    assert f == PLMap.from_points([(-2, -1), (0, 0)])
    # a slope-one first segment belongs to the tail
    g = PLMap.from_points([(-4, -3), (-2, -1), (0, 0)])
    assert g.points == ((-2, -1), (0, 0))
    # trailing diagonal segments are redundant
    h = PLMap.from_points([(-1, F(-1, 2)), (0, 0), (2, 2)])
    assert h == G0


def test_invalid_breakpoints_rejected():
    with pytest.raises(InvalidPLMap):
        PLMap.from_points([(0, 0), (1, 0)])
    with pytest.raises(InvalidPLMap):
        PLMap.from_points([(1, 1), (0, 0)])
    with pytest.raises(InvalidPLMap):
        PLMap.from_points([(-1, 0), (1, 2)])  # last point off the diagonal


def test_basic_geometry_of_g0():
    assert G0.offset == F(1, 2)
    assert G0.critical_point() == 0
    assert G0.norm() == F(1, 2)
    assert G0.germ_sign_left(0) == 1
    assert G0(-2) == F(-3, 2)
    assert G0(F(-1, 2)) == F(-1, 4)
    assert G0(1) == 1
    assert G0.preimage(F(-1, 4)) == F(-1, 2)


# ----------------------------------------------------------------------
# group structure


def test_square_of_g0():
    expected = PLMap.from_points(
        [(F(-3, 2), F(-1, 2)), (-1, F(-1, 4)), (0, 0)])
    assert G0 ** 2 == G0 * G0 == expected


def test_inverse_and_negative_powers():
    assert G0 * ~G0 == IDENTITY
    assert ~G0 * G0 == IDENTITY
    assert G0 ** -2 == ~(G0 ** 2)
    assert (~G0).offset == F(-1, 2)


def test_identity_composition():
    assert G0 * IDENTITY == G0
    assert IDENTITY * G0 == G0


# ----------------------------------------------------------------------
# germs and displacement


def test_germ_sign_away_from_fixed_points():
    assert G0.germ_sign_left(-3) == 1    # in the translated tail
    assert (~G0).germ_sign_left(-3) == -1
    assert G0.germ_sign_left(7) == 0     # identity to the left of 7


def test_sup_displaced():
    f = PLMap.from_points([(-3, -3), (-2, -1), (0, F(-1, 2)), (1, 1)])
    assert f.sup_displaced(1) == F(-2, 3)
    assert f.sup_displaced(-1) == 1
    assert G0.sup_displaced(1) == 0
    assert G0.sup_displaced(-1) is None
    assert IDENTITY.sup_displaced(1) is None
    with pytest.raises(ValueError):
        G0.sup_displaced(0)


def test_agrees_on_ray():
    bump = PLMap.from_points([(-10, -10), (-7, -6), (-5, -5)])
    f = G0 * bump
    assert f.agrees_on_ray(G0, -5)
    assert not f.agrees_on_ray(G0, -8)
    assert IDENTITY.agrees_on_ray(IDENTITY, 0)


# ----------------------------------------------------------------------
# text round trip


def test_format_and_parse():
    assert format_plmap(IDENTITY) == "id"
    text = format_plmap(G0)
    assert text == "1/2; (-1,-1/2) (0,0)"
    assert parse_plmap(text) == G0
    assert parse_plmap("id") == IDENTITY


def test_parse_rejects_bad_input():
    with pytest.raises(InvalidPLMap):
        parse_plmap("(-1,-1/2) (0,0)")  # no offset
    with pytest.raises(InvalidPLMap):
        parse_plmap("0; (-1,-1/2) (0,0)")  # wrong offset
    with pytest.raises(InvalidPLMap):
        parse_plmap("1/2; (-1,-1/2) junk (0,0)")
    with pytest.raises(InvalidPLMap):
        parse_plmap("1/2; ")


# ----------------------------------------------------------------------
# three-piece comparison maps


def test_make_tau_canonical_example():
    tau = make_tau(0, -2, -4, -1, -3)
    assert tau(-2) == -1
    assert tau(-4) == -3
    assert tau(0) == 0
    assert tau.norm() == 1
    # the lowest piece has slope one here, so it merges into the tail
    assert tau.points == ((-2, -1), (0, 0))


def test_make_tau_three_pieces():
    tau = make_tau(0, -1, -2, F(-1, 2), -3)
    assert tau.points == ((-2, -3), (-1, F(-1, 2)), (0, 0))
    assert tau(-3) == -4


def test_make_tau_validates():
    with pytest.raises(InvalidTau):
        make_tau(0, -4, -2, -1, -3)  # t''' not below t''
    with pytest.raises(InvalidTau):
        make_tau(0, -2, -4, -3, -1)  # v not below u
    with pytest.raises(InvalidTau):
        make_tau(0, -2, -4, -1, -1)


# ----------------------------------------------------------------------
# random bumps


def test_random_bump_is_deterministic_and_small():
    a = random_bump(-2, 2, F(1, 10), Random(11))
    b = random_bump(-2, 2, F(1, 10), Random(11))
    assert a == b
    assert a.norm() < F(1, 20)
    assert a(-2) == -2 and a(3) == 3 and a(-5) == -5


def test_random_bump_many_seeds_valid():
    for seed in range(40):
        f = random_bump(0, 1, F(1, 7), Random(seed), interior=4)
        assert f.norm() < F(1, 14)
        assert f.critical_point() is None or f.critical_point() <= 1


def test_perturb_stays_close():
    rng = Random(3)
    g = perturb(G0, F(1, 5), rng)
    diff = max(abs(g(x) - G0(x)) for x in
               [F(n, 8) for n in range(-40, 9)])
    assert diff < F(1, 5)


# ----------------------------------------------------------------------
# properties


@settings(max_examples=80)
@given(plmaps(), plmaps(), fractions(-20, 20))
def test_composition_evaluates_pointwise(f, g, x):
    assert (f * g)(x) == f(g(x))


@settings(max_examples=80)
@given(plmaps(), fractions(-20, 20))
def test_inverse_evaluates_pointwise(f, x):
    assert (~f)(f(x)) == x
    assert f.preimage(f(x)) == x


@settings(max_examples=50)
@given(plmaps(), plmaps())
def test_norm_subadditive(f, g):
    assert (f * g).norm() <= f.norm() + g.norm()


@settings(max_examples=50)
@given(plmaps(), plmaps())
def test_critical_point_of_composition(f, g):
    rs = [r for r in (f.critical_point(), g.critical_point()) if r is not None]
    r = (f * g).critical_point()
    if r is not None:
        assert rs and r <= max(rs)


@settings(max_examples=50)
@given(plmaps())
def test_round_trip_random(f):
    assert parse_plmap(format_plmap(f)) == f


def test_sign_helper():
    assert sign(F(3, 7)) == 1
    assert sign(-2) == -1
    assert sign(0) == 0
