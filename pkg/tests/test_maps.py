from __future__ import annotations

from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from hyperorbit import (BuiltinRule, CircleAffine, FiniteTable, InvalidInput, MultiMapSystem, PiecewiseLinear, Space,
                        builtin, commutes, evaluate, evaluate_word)
from hyperorbit.maps import check_map, lipschitz_constant, net_points

from strategies import pwl_maps, turn, unit

TENT = PiecewiseLinear.of((0, 0), ("1/2", 1), (1, 0))


def test_pwl_interpolates_and_hits_nodes():
    assert TENT(Q(1, 2)) == 1
    assert TENT(Q(1, 4)) == Q(1, 2)
    assert TENT(Q(2, 7)) == Q(4, 7)
    assert TENT(Q(1)) == 0


@pytest.mark.parametrize("nodes", [
    [(0, 0)],
    [(0, 0), ("1/2", 1)],
    [("1/4", 0), (1, 1)],
    [(0, 0), ("1/2", 1), ("1/2", 0), (1, 1)],
    [(0, 0), (1, 2)],
])
def test_pwl_validation(nodes):
    with pytest.raises(InvalidInput):
        PiecewiseLinear(tuple(nodes))


@given(pwl_maps(), unit)
def test_pwl_stays_in_interval(f, x):
    assert 0 <= f(x) <= 1


@given(pwl_maps(), unit, unit)
def test_pwl_lipschitz_bound_is_exact_bound(f, x, y):
    assert abs(f(x) - f(y)) <= lipschitz_constant(f, Space.interval()) * abs(x - y)


@given(pwl_maps(), unit)
def test_preimages_map_to_target(f, x):
    y = f(x)
    pre = f.preimages(y)
    assert all(f(p) == y for p in pre)


def test_circle_affine_reduces_mod_one():
    f = CircleAffine(3, Q(5, 4))
    assert f.b == Q(1, 4)
    assert f(Q(1, 2)) == Q(3, 4)
    assert CircleAffine(0, Q(1, 3))(Q(7, 9)) == Q(1, 3)
    with pytest.raises(InvalidInput):
        CircleAffine(Q(1, 2))


@given(st.integers(-5, 5), turn, turn)
def test_circle_affine_lands_on_circle(a, b, t):
    assert 0 <= CircleAffine(a, b)(t) < 1


def test_finite_table_checks_range_against_space():
    check_map(FiniteTable((1, 0)), Space.finite(2))
    with pytest.raises(InvalidInput):
        check_map(FiniteTable((0, 2)), Space.finite(2))
    with pytest.raises(InvalidInput):
        check_map(FiniteTable((0, 1, 1)), Space.finite(2))
    with pytest.raises(InvalidInput):
        check_map(TENT, Space.circle())


def test_sequence_rules():
    f1, f2 = BuiltinRule("seq_f1"), BuiltinRule("seq_f2")
    assert [f1(Q(1, n)) for n in (1, 2, 3, 4)] == [Q(1, 2), Q(1, 3), Q(1), Q(1, 5)]
    assert [f2(Q(1, n)) for n in (1, 4, 5, 3, 2)] == [Q(1, 4), Q(1, 5), Q(1), Q(1, 6), Q(1, 3)]
    assert f1(Q(0)) == f2(Q(0)) == 0
    with pytest.raises(InvalidInput):
        BuiltinRule("nope")


def test_evaluate_validates_point():
    assert evaluate(TENT, Space.interval(), "1/3") == Q(2, 3)
    with pytest.raises(InvalidInput):
        evaluate(TENT, Space.interval(), "5/4")


def test_word_order_last_index_first():
    F = builtin("truncated-tent-pair")
    f1, f2 = F.maps
    x = Q(1, 3)
    assert evaluate_word(F, (1, 2), x) == f1(f2(x))
    assert evaluate_word(F, (2, 1), x) == f2(f1(x))
    assert f1(f2(x)) != f2(f1(x))


@pytest.mark.parametrize("word", [(), (0,), (3,), (1, True)])
def test_bad_words(word):
    with pytest.raises(InvalidInput):
        evaluate_word(builtin("tent-pair"), word, 0)


def test_commutation_modes():
    assert commutes(builtin("rot3-pair"), 1, 2).verdict == "yes"
    assert commutes(builtin("identity-pair"), 1, 2).verdict == "yes"
    tent = commutes(builtin("tent-pair"), 1, 2)
    assert tent.verdict == "no"
    F = builtin("tent-pair")
    f1, f2 = F.maps
    assert f1(f2(tent.witness)) != f2(f1(tent.witness))
    rot = MultiMapSystem(Space.circle(), (CircleAffine(1, Q(1, 3)), CircleAffine(1, Q(1, 5))))
    assert commutes(rot, 1, 2).method == "symbolic" and commutes(rot, 1, 2)
    assert commutes(builtin("circle-23"), 1, 2).verdict == "yes"
    assert commutes(MultiMapSystem(Space.circle(), (CircleAffine(2, 0), CircleAffine(1, Q(1, 3)))), 1, 2).verdict == "no"
    assert commutes(builtin("seq-space"), 1, 2).verdict == "no"
    assert commutes(rot, 1, 2, mode="sampled").verdict == "unknown"


@given(st.integers(-3, 3), turn, st.integers(-3, 3), turn)
def test_symbolic_commutation_matches_evaluation(a1, b1, a2, b2):
    F = MultiMapSystem(Space.circle(), (CircleAffine(a1, b1), CircleAffine(a2, b2)))
    f, g = F.maps
    verdict = commutes(F, 1, 2)
    agree = all(f(g(x)) == g(f(x)) for x in net_points(F.space, 60))
    if verdict:
        assert agree
    else:
        w = verdict.witness
        assert f(g(w)) != g(f(w))


@given(pwl_maps(), pwl_maps(), unit)
def test_breakpoint_commutation_is_sound(f, g, x):
    F = MultiMapSystem(Space.interval(), (f, g))
    verdict = commutes(F, 1, 2)
    if verdict:
        assert f(g(x)) == g(f(x))
    else:
        assert f(g(verdict.witness)) != g(f(verdict.witness))
