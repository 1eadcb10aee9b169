"""Tests for the two-orders construction and its search stages."""

from fractions import Fraction
from random import Random

import pytest

from biorders.noniso import (ChainError, NoMovement, NonIsoInput, NotFound,
                             build_tau_pair, choose_probe, decorate,
                             find_push_word, nonisolation_witness,
                             normalize_push, smallest_conjugate)
from biorders.plmaps import IDENTITY, InvalidTau, PLMap
from biorders.realization import (Realization, standard_merged_free_group,
                                  standard_z)
from biorders.words import free_group

T_M = Fraction(-9, 1280)
T_M1 = Fraction(-27, 1280)
T_M2 = Fraction(-63, 1280)
T_M3 = Fraction(-27, 256)
T_PRIME = Fraction(-9, 2560)
T_DPRIME = Fraction(-1289, 1280)
T_TPRIME = Fraction(-1929, 1280)


@pytest.fixture(scope="module")
def merged():
    return standard_merged_free_group()


@pytest.fixture(scope="module")
def chain(merged):
    fp = merged.group
    return (fp.parse("a"), fp.parse("b"), fp.parse("a b"))


@pytest.fixture(scope="module")
def witness(merged, chain):
    task = NonIsoInput(realization=merged, chain=chain,
                       search_radius=4, audit_radius=2, seed=7)
    return nonisolation_witness(task)


# ----------------------------------------------------------------------
# search stages


def test_smallest_conjugate_picks_a_undecorated(merged, chain):
    fp = merged.group
    f0, u = smallest_conjugate(merged, chain)
    assert fp.format(f0) == "a^1"
    assert u == fp.identity


def test_smallest_conjugate_is_minimal_over_candidates(merged, chain):
    fp = merged.group
    f1 = chain[0]
    f0, _ = smallest_conjugate(merged, chain, all_subwords=True)
    for element in chain:
        for u in fp.subwords(element):
            candidate = fp.conjugate(f1, u)
            diff = fp.multiply(fp.invert(f0), candidate)
            assert merged.sign(diff) >= 0


def test_find_push_word_is_b_inverse(merged, chain):
    fp = merged.group
    word = find_push_word(merged, chain[0], chain[0], 4)
    assert fp.format(word) == "b^-1"


def test_find_push_word_identity_when_already_below(merged):
    fp = merged.group
    # b's support sits strictly above a's critical point, so no pushing
    # is needed in this direction and the empty word qualifies.
    assert find_push_word(merged, fp.parse("a"), fp.parse("b"), 4) \
        == fp.identity


def test_find_push_word_exhausted(merged):
    fp = merged.group
    with pytest.raises(NotFound):
        find_push_word(merged, fp.parse("b"), fp.parse("a"), 0)


def test_normalize_push_single_descending_syllable(merged):
    fp = merged.group
    word, points = normalize_push(merged, fp.parse("b^-1"), 0, 0)
    assert fp.format(word) == "b^-1"
    assert points == (T_M,)


def test_normalize_push_truncates_after_first_drop(merged):
    fp = merged.group
    # a^1 b^-1 applies b^-1 first, which already lands below 0; the
    # later a-step is cut even though it also descends.
    word, points = normalize_push(merged, fp.parse("a^1 b^-1"), 0, 0)
    assert fp.format(word) == "b^-1"
    assert points == (T_M,)


def test_normalize_push_degenerates_when_target_unreached(merged):
    fp = merged.group
    # One application of b^-1 moves -5 down a little, but nowhere near
    # the target, so the push degenerates.
    word, points = normalize_push(merged, fp.parse("b^-1"), -5, -10)
    assert word == fp.identity
    assert points == ()


def test_normalize_push_postconditions_on_ball(merged):
    fp = merged.group
    t1, t0 = Fraction(0), Fraction(0)
    for w in fp.ball(3):
        word, points = normalize_push(merged, w, t1, t0)
        if not word.letters:
            assert points == ()
            continue
        assert len(points) == len(word.letters)
        assert all(p > q for p, q in zip((t1,) + points, points))
        assert all(p >= t0 for p in points[:-1])
        assert points[-1] < t0
        # replaying the word reproduces the recorded staircase
        t = t1
        replay = []
        for letter in reversed(word.letters):
            t = merged.letter_map(letter)(t)
            replay.append(t)
        assert tuple(replay) == points


def test_choose_probe_acceptance_values(merged):
    fp = merged.group
    g, t_dp, t_tp = choose_probe(merged, "a", T_M)
    assert fp.format(g) == "a^-1"
    assert t_dp == T_DPRIME
    assert t_tp == T_TPRIME


def test_choose_probe_unbounded_interval_backs_off_one(merged):
    # b acts as an upward translation arbitrarily far down, so its
    # inverse descends on an unbounded interval and the probe point sits
    # one unit inside the bound.
    fp = merged.group
    g, t_dp, t_tp = choose_probe(merged, "b", 0)
    assert fp.format(g) == "b^-1"
    assert t_dp == -1
    assert t_tp == merged.realize(g)(t_dp)
    assert t_tp < t_dp < 0


@pytest.fixture(scope="module")
def bump_realization():
    # b is supported only on (1, 2); a descends everywhere below 0.
    fp = free_group("a", "b")
    a = PLMap.from_points(((-1, -2), (0, 0)))
    b = PLMap.from_points(((1, 1), (Fraction(3, 2), Fraction(7, 4)), (2, 2)))
    return Realization(fp, {"a": a, "b": b})


def test_choose_probe_bounded_interval_uses_midpoint(bump_realization):
    fp = bump_realization.group
    g, t_dp, t_tp = choose_probe(bump_realization, "b", 10)
    assert fp.format(g) == "b^-1"
    assert t_dp == Fraction(3, 2)
    assert t_tp == Fraction(4, 3)


def test_choose_probe_no_movement_below_support(bump_realization):
    with pytest.raises(NoMovement):
        choose_probe(bump_realization, "b", 0)


# ----------------------------------------------------------------------
# the auxiliary pair


def test_build_tau_pair_exact_points():
    tau1, tau2 = build_tau_pair(T_PRIME, T_DPRIME, T_TPRIME,
                                T_M, T_M1, T_M3)
    assert tau1.points == ((T_TPRIME, T_M1), (T_DPRIME, T_M),
                           (T_PRIME, T_PRIME))
    assert tau2.points == ((T_TPRIME, T_M3), (T_DPRIME, T_M),
                           (T_PRIME, T_PRIME))


def test_build_tau_pair_checks_probe_sides(merged):
    probe_map = merged.realize(merged.group.parse("a^-1"))
    # correct targets pass
    build_tau_pair(T_PRIME, T_DPRIME, T_TPRIME, T_M, T_M1, T_M3,
                   probe_map=probe_map, t_m2=T_M2)
    # swapping the two targets puts both probes on the wrong side
    with pytest.raises(InvalidTau):
        build_tau_pair(T_PRIME, T_DPRIME, T_TPRIME, T_M, T_M3, T_M1,
                       probe_map=probe_map, t_m2=T_M2)


def test_build_tau_pair_rejects_bad_geometry():
    with pytest.raises(InvalidTau):
        # probe points out of order
        build_tau_pair(T_PRIME, T_TPRIME, T_DPRIME, T_M, T_M1, T_M3)


# ----------------------------------------------------------------------
# chain validation


def test_rejects_negative_chain(merged):
    fp = merged.group
    task = NonIsoInput(merged, (fp.parse("a^-1"),), 4, 2)
    with pytest.raises(ChainError):
        nonisolation_witness(task)


def test_rejects_non_increasing_chain(merged):
    fp = merged.group
    task = NonIsoInput(merged, (fp.parse("b"), fp.parse("a")), 4, 2)
    with pytest.raises(ChainError):
        nonisolation_witness(task)


def test_rejects_empty_chain(merged):
    with pytest.raises(ChainError):
        nonisolation_witness(NonIsoInput(merged, (), 4, 2))


def test_rejects_single_factor_realization():
    single = standard_z("a")
    task = NonIsoInput(single, (single.group.parse("a"),), 2, 1)
    with pytest.raises(ChainError):
        nonisolation_witness(task)


# ----------------------------------------------------------------------
# the full construction


def test_witness_search_results(witness, merged):
    fp = merged.group
    assert fp.format(witness.f0) == "a^1"
    assert witness.conjugator == fp.identity
    assert fp.format(witness.fprime) == "b^-1"
    assert fp.format(witness.probe) == "a^-1"
    assert witness.probe_points == (T_DPRIME, T_TPRIME)
    assert witness.landmarks == (T_M, T_M1, T_M2, T_M3)


def test_witness_pair_and_verdicts(witness, merged):
    fp = merged.group
    w_plus, w_minus = witness.witness_pair
    assert fp.format(w_plus) == "a^-1 b^-1 a^1 b^1 a^1"
    assert fp.format(w_minus) == "b^-2 a^1 b^2"
    assert witness.verdicts == ("greater", "less")
    diff = witness.disagreement_word
    assert fp.format(diff) == "a^-1 b^-1 a^-1 b^1 a^1 b^-2 a^1 b^2"
    assert witness.order1.sign(diff) == -1
    assert witness.order2.sign(diff) == 1


def test_witness_orders_keep_chain_positive(witness, chain):
    for element in chain:
        assert witness.order1.sign(element) == 1
        assert witness.order2.sign(element) == 1


def test_witness_audits_clean(witness):
    first, second = witness.audits
    for audit in (first, second):
        assert audit.ok
        assert audit.radius == 2
        assert audit.words == 17
        assert audit.pairs_checked == 2737


def test_witness_tau_supports_below_chain(witness):
    assert witness.tau1.critical_point() < 0
    assert witness.tau2.critical_point() < 0


def test_witness_probe_inequalities_after_adjustment(witness, merged):
    probe_map = merged.realize(witness.probe)
    raised = witness.tau1(probe_map(witness.tau1.preimage(T_M)))
    lowered = witness.tau2(probe_map(witness.tau2.preimage(T_M)))
    assert raised > T_M2
    assert lowered < T_M2


def test_witness_agrees_with_base_on_small_ball(witness):
    # The produced orders deviate from the base order only far out; on
    # the radius-3 ball all three coincide here, and the recorded
    # difference list says so.
    assert witness.ball_differences == ()


def test_decorate_is_a_homomorphism(witness, merged):
    fp = merged.group
    combined = witness.order1.realization.group
    side = witness.order1.wrapped_factor
    wrapper = witness.order1.wrapper
    rng = Random(11)
    ball = list(fp.ball(2))
    for _ in range(25):
        u, v = rng.choice(ball), rng.choice(ball)
        left = decorate(combined, fp.multiply(u, v), side, wrapper)
        right = combined.multiply(decorate(combined, u, side, wrapper),
                                  decorate(combined, v, side, wrapper))
        assert left == right


def test_decorate_leaves_other_factor_alone(witness, merged):
    fp = merged.group
    combined = witness.order1.realization.group
    side = witness.order1.wrapped_factor
    wrapper = witness.order1.wrapper
    w = fp.parse("b^3")
    assert decorate(combined, w, side, wrapper) == combined.parse("b^3")
    assert decorate(combined, fp.parse("a"), side, wrapper) \
        == combined.parse(f"{wrapper}^1 a^1 {wrapper}^-1")


def test_decorated_realization_telescopes(witness, merged):
    # Realizing a decorated word equals composing, syllable by syllable,
    # the base maps with the wrapped factor's maps conjugated by tau.
    fp = merged.group
    combined = witness.order1.realization
    side = witness.order1.wrapped_factor
    wrapper = witness.order1.wrapper
    tau = witness.tau1
    assert combined.letter_map(
        combined.group.generator(wrapper, 1).letters[0]) == tau
    rng = Random(23)
    ball = list(fp.ball(3))
    for _ in range(10):
        w = rng.choice(ball)
        expected = IDENTITY
        for letter in w.letters:
            m = merged.letter_map(letter)
            if letter.factor == side:
                m = tau * m * ~tau
            expected = expected * m
        decorated = decorate(combined.group, w, side, wrapper)
        assert combined.realize(decorated) == expected


def test_decorated_critical_points_stable_on_chain(witness, merged, chain):
    for oracle in (witness.order1, witness.order2):
        combined = oracle.realization
        for element in chain:
            decorated = oracle.decorate(element)
            assert combined.realize(decorated).critical_point() \
                == merged.realize(element).critical_point()
