from __future__ import annotations

import json
from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, settings, strategies as st

from hyperorbit import InvalidInput, MultiMapSystem, Space, builtin
from hyperorbit import analysis as an
from hyperorbit.maps import CircleAffine, FiniteTable, PiecewiseLinear
from hyperorbit.setdyn import hausdorff, orbit
from hyperorbit.space import UnsupportedOperation

from strategies import turn


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# --- open sets and sampling -------------------------------------------------

def test_open_set_validation():
    I = builtin("tent-pair")
    with pytest.raises(InvalidInput):
        an.sensitivity_scan(I, Q(1, 4), [an.Ball(Q(1, 2), Q(0))])
    with pytest.raises(InvalidInput):
        an.sensitivity_scan(I, Q(1, 4), [an.Subset((Q(1, 2),))])
    with pytest.raises(InvalidInput):
        an.sensitivity_scan(builtin("rot3-pair"), Q(1, 2), [an.Subset(())])


@pytest.mark.parametrize("space,U", [
    (Space.interval(), an.Ball(Q(0), Q(1, 32))),
    (Space.circle(), an.Ball(Q(0), Q(1, 16))),
    (Space.seq(), an.Ball(Q(0), Q(1, 10))),
    (Space.seq(), an.Ball(Q(1, 3), Q(1, 100))),
    (Space.finite(4), an.Subset((1, 3))),
])
def test_sampler_points_lie_in_open_set(space, U):
    import random
    pts = an.DEFAULT_SAMPLER.points(space, U, random.Random(0))
    assert pts and len(set(pts)) == len(pts)
    assert all(space.contains(p) and U.contains(space, p) for p in pts)


def test_seeded_balls_deterministic():
    a = an.seeded_balls(Space.interval(), 5, Q(1, 32), seed=3)
    assert a == an.seeded_balls(Space.interval(), 5, Q(1, 32), seed=3)
    assert a != an.seeded_balls(Space.interval(), 5, Q(1, 32), seed=4)


# --- periodicity -------------------------------------------------------------

def test_fixed_point_needs_every_map():
    F = builtin("tent-pair")
    assert not an.is_fixed_point(F, 0)
    G = builtin("identity-pair")
    assert an.is_fixed_point(G, Q(3, 8))
    assert an.classify_periodic(G, Q(3, 8)).status == "fixed"


def test_period_counts_transient_sets():
    v = an.classify_periodic(builtin("truncated-tent-pair"), Q(2, 7))
    assert (v.status, v.period, v.witness_m) == ("periodic", 4, 3)
    assert (v.orbit.preperiod, v.orbit.cycle) == (1, 3)


def test_not_periodic_after_cycle_without_base():
    # 0 -> 1 and 1 -> 1 under both maps: the set sequence is {1} forever
    F = MultiMapSystem(Space.finite(2), (FiniteTable((1, 1)), FiniteTable((1, 1))))
    assert an.classify_periodic(F, 0).status == "not_periodic"


def test_unknown_when_budget_runs_out():
    v = an.classify_periodic(builtin("seq-space"), 1, max_steps=100)
    assert v.status == "unknown" and not v.is_periodic


def test_classical_verdicts():
    I = Space.interval()
    tent = builtin("tent-pair").maps[0]
    assert an.classify_periodic_classical(tent, I, Q(2, 3)).status == "fixed"
    v = an.classify_periodic_classical(tent, I, Q(2, 5))
    assert (v.status, v.period) == ("periodic", 2)
    assert an.classify_periodic_classical(tent, I, Q(1, 3)).status == "not_periodic"
    doubling = CircleAffine(2, 0)
    assert an.classify_periodic_classical(doubling, Space.circle(), Q(1, 997), budget=5).status == "unknown"


@given(st.integers(1, 60).flatmap(lambda q: st.integers(0, q - 1).map(lambda p: (p, 2 * q + 1))))
def test_odd_denominators_periodic_under_doubling(pq):
    p, q = pq
    assert an.classify_periodic_classical(CircleAffine(2, 0), Space.circle(), Q(p, q)).is_periodic


# --- Ran(F) and transitivity -------------------------------------------------

def test_ran_enumeration_order_and_exactness():
    ran = an.enumerate_ran_finite(builtin("rot3-pair"))
    assert ran.exact
    assert sorted(ran.sets) == sorted([(1, 2), (0, 2), (0, 1), (0, 1, 2)])


def test_ran_requires_finite_space():
    with pytest.raises(UnsupportedOperation):
        an.enumerate_ran_finite(builtin("tent-pair"))


def test_transitive_and_counterexample():
    assert an.is_transitive_finite(builtin("binary-endpoints")).verdict == "transitive"
    rep = an.is_transitive_finite(builtin("rot3-pair"))
    U, family = rep.counterexample
    assert U.points == (0,) and family == [(0, 2)]
    # no iterate of 0 is the set {0, 2}
    assert (0, 2) not in orbit(builtin("rot3-pair"), 0, 12).sets


def test_non_surjective_single_map_differs_from_classical():
    # f: 0 -> 1, 1 -> 1. Ran({f}) = {{1}}, which every orbit hits; classically 0 is never revisited
    F = MultiMapSystem(Space.finite(2), (FiniteTable((1, 1)),))
    assert an.is_transitive_finite(F).verdict == "transitive"
    assert not an.is_transitive_classical_finite(F.maps[0], F.space)


def test_transitivity_witness_reverifies():
    F = builtin("tent-pair")
    U = an.Ball(Q(1, 3), Q(1, 10))
    target = (Q(0), Q(1))
    w = an.transitivity_witness(F, U, target, Q(1, 100))
    assert w is not None and an.verify_transitivity_witness(F, U, target, Q(1, 100), w)
    forged = an.TransitivityWitness(w.u, w.n, w.distance + 1)
    assert not an.verify_transitivity_witness(F, U, target, Q(1, 100), forged)


def test_transitivity_evidence_inconclusive_for_identity():
    rep = an.transitivity_evidence(builtin("identity-pair"), pairs=3, horizon=5)
    assert rep.verdict in ("witnessed", "inconclusive")
    assert rep.verdict == "inconclusive" or all(w for _, _, w in rep.witnesses)


# --- sensitivity -------------------------------------------------------------

def test_finite_space_sensitivity_refuted():
    rep = an.sensitivity_scan(builtin("binary-endpoints"), Q(1, 2))
    assert rep.verdict == "refuted-on-finite-space"
    assert rep.blocking_set == an.Subset((0,))


def test_sensitivity_witnesses_reverify_and_forgeries_fail():
    F = builtin("tent-pair")
    balls = an.seeded_balls(F.space, 4, Q(1, 32), seed=2)
    rep = an.sensitivity_scan(F, Q(1, 3), balls)
    for o in rep.outcomes:
        assert an.verify_sensitivity_witness(F, Q(1, 3), o.open_set, o.witness)
        w = o.witness
        assert not an.verify_sensitivity_witness(F, Q(1, 3), o.open_set, an.SensitivityWitness(w.x, w.x, w.n, w.distance))


def test_sensitivity_independent_of_jobs_and_deterministic():
    F = builtin("truncated-tent-pair")
    space = F.space
    a = an.sensitivity_scan(F, Q(1, 4), horizon=20, seed=7, jobs=1).to_dict(space)
    b = an.sensitivity_scan(F, Q(1, 4), horizon=20, seed=7, jobs=4).to_dict(space)
    assert _json(a) == _json(b)


def test_single_truncated_maps_not_sensitive_on_flat_half():
    F = builtin("truncated-tent-pair")
    rep = an.sensitivity_scan(F.single(1), Q(1, 4), [an.Ball(Q(3, 4), Q(1, 4))], horizon=50)
    assert rep.outcomes[0].witness is None and rep.outcomes[0].max_distance == 0


def test_nonexpanding_certificate():
    assert an.nonexpanding(builtin("identity-pair"))
    assert not an.nonexpanding(builtin("tent-pair"))
    assert not an.nonexpanding(builtin("seq-space"))
    assert not an.nonexpanding(builtin("rot3-pair"))


# --- expansion ---------------------------------------------------------------

def test_expansion_requires_lambda_above_one():
    with pytest.raises(InvalidInput):
        an.ExpansionCheckConfig(Q(1))


def test_wrap_guard():
    F = builtin("circle-23")
    assert an.no_wrap(F, Q(1, 10), Q(1, 8))
    assert not an.no_wrap(F, Q(0), Q(1, 2))
    assert not an.no_wrap(F, Q(11, 20), Q(2, 5))
    res = an.expansion_check(F, an.ExpansionCheckConfig(Q(3, 2), wrap_guard=False), [(Q(11, 20), Q(2, 5))])
    assert res.verdict == "fails" and res.witness.margin <= 0


@settings(max_examples=300)
@given(turn, st.fractions(min_value=Q(-1, 6), max_value=Q(1, 6), max_denominator=400))
def test_expansion_holds_for_every_guarded_pair(x, t):
    F = builtin("circle-23")
    y = x + t
    assume(t != 0 and 0 <= y < 1 and an.no_wrap(F, x, y))
    assert an.expansion_margin(F, x, y, Q(3, 2)).margin > 0


def test_expansion_check_rejects_all_guarded_out():
    F = builtin("circle-23")
    with pytest.raises(InvalidInput):
        an.expansion_check(F, an.ExpansionCheckConfig(Q(3, 2)), [(Q(0), Q(1, 2))])


def test_sampled_pairs_respect_gap_and_guard():
    F = builtin("circle-23")
    cfg = an.ExpansionCheckConfig(Q(3, 2), samples=100, max_gap=Q(1, 6), seed=4)
    pairs = an.sample_expansion_pairs(F, cfg)
    assert len(pairs) == 100
    assert all(0 < F.space.distance(x, y) < Q(1, 6) and an.no_wrap(F, x, y) for x, y in pairs)


# --- density, diagnostics and the composite --------------------------------

def test_epsilon_net_covers_space():
    net = an.epsilon_net(Space.interval(), Q(1, 10))
    assert all(min(abs(x - z) for z in net) <= Q(1, 10) for x in (Q(k, 97) for k in range(98)))


def test_density_on_finite_space():
    rep = an.periodic_density_scan(builtin("rot3-pair"), Q(1, 2))
    assert rep.coverage == 1
    F = MultiMapSystem(Space.finite(2), (FiniteTable((1, 1)),))
    assert an.periodic_density_scan(F, Q(1, 2)).coverage == Q(1, 2)


def test_orbit_distance_diagnostics_differ():
    F = builtin("truncated-tent-pair")
    orb = an.classify_periodic(F, Q(2, 7)).orbit
    x = Q(1, 2)
    assert an.point_to_orbit_union(F.space, x, orb) == Q(1, 14)
    assert an.point_to_orbit_sets(F.space, x, orb) == min(hausdorff(F.space, (x,), S) for S in orb.sets)
    assert an.point_to_orbit_sets(F.space, x, orb) >= an.point_to_orbit_union(F.space, x, orb)


@pytest.mark.parametrize("name,label", [
    ("identity-pair", "refuted(sensitivity)"),
    ("rot3-pair", "refuted(transitivity)"),
    ("binary-endpoints", "refuted(sensitivity)"),
])
def test_devaney_labels(name, label):
    assert an.devaney_report(builtin(name)).label == label


def test_devaney_report_serializes():
    F = builtin("binary-endpoints")
    data = an.devaney_report(F).to_dict(F.space)
    assert json.loads(json.dumps(data))["label"] == "refuted(sensitivity)"
