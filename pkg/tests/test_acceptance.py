"""Acceptance criteria 1-11, each at its stated tolerance (exact unless noted)."""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction as Q

from hyperorbit import analysis as an
from hyperorbit import repro
from hyperorbit.setdyn import deleted_orbit, image_set, make_set, orbit
from hyperorbit.systems import builtin, builtin_names

from acceptance_log import criterion


def test_c01_truncated_tent_orbit():
    with criterion(1, "deleted orbit of 2/7 is four sets; period 4"):
        F = builtin("truncated-tent-pair")
        orb = deleted_orbit(F, Q(2, 7))
        assert orb.sets == [(Q(4, 7), Q(1)), (Q(0), Q(6, 7), Q(1)), (Q(0), Q(2, 7), Q(1)), (Q(0), Q(4, 7), Q(1))]
        v = an.classify_periodic(F, Q(2, 7))
        assert v.status == "periodic" and v.period == 4


def test_c02_classical_contrast():
    with criterion(2, "2/7 is classically periodic for neither map"):
        F = builtin("truncated-tent-pair")
        f1, f2 = F.maps
        x, seen = Q(2, 7), []
        for _ in range(5):
            x = f1(x)
            seen.append(x)
        assert seen == [Q(4, 7), Q(1), Q(1), Q(1), Q(1)]
        x, seen = Q(2, 7), []
        for _ in range(8):
            x = f2(x)
            seen.append(x)
        assert seen == [Q(1), Q(0), Q(1), Q(0), Q(1), Q(0), Q(1), Q(0)]
        for f in (f1, f2):
            assert an.classify_periodic_classical(f, F.space, Q(2, 7)).status == "not_periodic"


def test_c03_sequence_space():
    with criterion(3, "1 has classical period 3 for both maps, F-orbit never returns within 100"):
        F = builtin("seq-space")
        for f in F.maps:
            v = an.classify_periodic_classical(f, F.space, Q(1))
            assert (v.status, v.period) == ("periodic", 3)
        rec = orbit(F, 1, 4)
        assert rec.sets == [make_set([Q(1, 2), Q(1, 4)]), make_set([Q(1, 3), Q(1, 5)]),
                            make_set([Q(1, 6), Q(1)]), make_set([Q(1, 2), Q(1, 4), Q(1, 7)])]
        assert an.classify_periodic(F, 1, max_steps=100).status != "periodic"


def test_c04_rot3_ran():
    with criterion(4, "Ran(F) of the 3-cycle pair; counterexample U={0}, family {{0,2}}"):
        F = builtin("rot3-pair")
        ran = an.enumerate_ran_finite(F)
        assert len(ran.sets) == 4 and set(ran.sets) == {(1, 2), (0, 2), (0, 1), (0, 1, 2)}
        rep = an.is_transitive_finite(F)
        assert rep.verdict == "not_transitive"
        U, family = rep.counterexample
        assert U == an.Subset((0,)) and family == [(0, 2)]
        assert all(an.is_transitive_classical_finite(f, F.space) for f in F.maps)


def test_c05_binary_endpoints():
    with criterion(5, "two constants on {0,1}: Ran(F) = {{0,1}}, transitive"):
        F = builtin("binary-endpoints")
        assert an.enumerate_ran_finite(F).sets == [(0, 1)]
        assert an.is_transitive_finite(F).verdict == "transitive"


def test_c06_tent_pair_sensitivity():
    with criterion(6, "tent pair: witness with d_H >= 1/2 in 20 balls; f1^n + f2^n = 1"):
        F = builtin("tent-pair")
        f1, f2 = F.maps
        delta = Q(127, 256)
        balls = an.seeded_balls(F.space, 20, Q(1, 32), seed=0)
        rep = an.sensitivity_scan(F, delta, balls, horizon=30, seed=0)
        assert len(rep.outcomes) == 20
        for o in rep.outcomes:
            assert o.witness is not None and o.witness.distance >= Q(1, 2)
            assert an.verify_sensitivity_witness(F, delta, o.open_set, o.witness)
        rng = random.Random(2026)
        for k in range(200):
            q = rng.randint(1, 10 ** 4)
            x = Q(rng.randint(0, q), q)
            a = b = x
            S = (x,)
            for n in range(1, 21):
                a, b, S = f1(a), f2(b), image_set(F, S)
                assert a + b == 1
                assert S == make_set([a, 1 - a])
                if k < 10 and n <= 10:
                    assert S == _words(F, x, n)


def test_c07_truncated_tent_sensitivity():
    with criterion(7, "truncated tent pair sensitive at 1/4; each map alone is flat on one half"):
        F = builtin("truncated-tent-pair")
        delta = Q(1, 4)
        balls = an.seeded_balls(F.space, 20, Q(1, 32), seed=0)
        rep = an.sensitivity_scan(F, delta, balls, horizon=30, seed=0)
        assert rep.verdict == "witnessed-for-all-tested-sets"
        assert all(an.verify_sensitivity_witness(F, delta, o.open_set, o.witness) for o in rep.outcomes)
        for i, U in ((1, an.Ball(Q(3, 4), Q(1, 4))), (2, an.Ball(Q(1, 4), Q(1, 4)))):
            single = an.sensitivity_scan(F.single(i), delta, [U], horizon=50)
            assert single.outcomes[0].witness is None
            assert single.outcomes[0].max_distance == 0


def test_c08_circle_expansion():
    with criterion(8, "2t, 3t on the circle expand by 3/2 on 500 guarded pairs"):
        F = builtin("circle-23")
        cfg = an.ExpansionCheckConfig(Q(3, 2), samples=500, max_gap=Q(1, 6), wrap_guard=True, seed=0)
        pairs = an.sample_expansion_pairs(F, cfg)
        assert len(pairs) == 500
        assert all(0 < F.space.distance(x, y) < Q(1, 6) for x, y in pairs)
        res = an.expansion_check(F, cfg, pairs)
        assert res.verdict == "holds-on-samples" and res.checked == 500
        assert res.margin > 0


def test_c09_collapse_doubling_devaney():
    with criterion(9, "constant 0 plus doubling: evidence-for-chaos"):
        F = builtin("collapse-doubling")
        cfg = an.DevaneyConfig(seed=1, transitivity_pairs=10, transitivity_epsilon=Q(1, 100),
                               transitivity_horizon=40, density_epsilon=Q(1, 50), density_max_denominator=101,
                               density_odd_only=True, sensitivity_delta=Q(1, 5), sensitivity_balls=20)
        rep = an.devaney_report(F, cfg)
        assert rep.label == "evidence-for-chaos"
        assert len(rep.transitivity.witnesses) == 10
        for U, T, w in rep.transitivity.witnesses:
            assert w is not None and an.verify_transitivity_witness(F, U, T, Q(1, 100), w)
        assert rep.density.coverage == 1
        f2 = F.maps[1]
        for z, p in zip(rep.density.net, rep.density.nearest):
            assert F.space.distance(z, p) <= Q(1, 50)
            assert p.denominator % 2 == 1 and p.denominator <= 101
            assert an.classify_periodic_classical(f2, F.space, p).is_periodic
            # 2^k p = p (mod 1) for k the order of 2 modulo q
            q = p.denominator
            k = 1 if q == 1 else next(k for k in range(1, q + 1) if pow(2, k, q) == 1)
            assert (2 ** k * p - p).denominator == 1
        assert len(rep.sensitivity.outcomes) == 20
        for o in rep.sensitivity.outcomes:
            assert o.witness is not None and an.verify_sensitivity_witness(F, Q(1, 5), o.open_set, o.witness)


def test_c10_property_suites():
    with criterion(10, "seeded property suites, zero failures"):
        checks = (repro.suite_hausdorff(1000) + repro.suite_orbits(1000) + repro.suite_fixed_points(200)
                  + repro.suite_commuting(100) + repro.suite_constant_collapse(100) + repro.suite_degeneracy(100))
        failed = [(c.name, c.actual) for c in checks if not c.passed]
        assert not failed, failed


def _words(F, x, n):
    """F^n(x) from every composition word, evaluated map by map."""
    out = set()
    for word in itertools.product(F.maps, repeat=n):
        y = x
        for f in reversed(word):
            y = f(y)
        out.add(y)
    return tuple(sorted(out))


def test_c11_word_oracle():
    with criterion(11, "word enumeration equals iterated image sets (builtins + 50 random systems)"):
        rng = random.Random(11)
        systems = [builtin(name) for name in builtin_names()]
        systems += [repro.random_system(rng) for _ in range(50)]
        for F in systems:
            x = an.random_point(F.space, rng, 24)
            top = 10 if len(F) <= 2 else int(math.log(1024, len(F)))
            S = (x,)
            for n in range(1, top + 1):
                S = image_set(F, S)
                assert _words(F, x, n) == S, (F, x, n)
