"""Reproduction cases for the reference computations, plus the seeded property suites.

Each case returns a list of :class:`Check` objects with exact expected and
actual values rendered as strings; ``hyperorbit repro`` prints and stores them.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import analysis as an
from .maps import CircleAffine, FiniteTable, PiecewiseLinear, commutes
from .setdyn import brute_force_iterate, deleted_orbit, format_set, hausdorff, image_set, make_set, orbit, set_union
from .space import Space
from .systems import GeneratorSpec, MultiMapSystem, builtin, builtin_names, generate

Q = Fraction


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "passed": self.passed}


def check(name, expected, actual) -> Check:
    return Check(name, expected, actual, expected == actual)


def check_true(name, ok: bool, actual="") -> Check:
    return Check(name, True, actual if actual != "" else bool(ok), bool(ok))


@dataclass
class Case:
    id: str
    criterion: int | None
    description: str
    run: Callable[[], list[Check]]


@dataclass
class CaseResult:
    case: Case
    checks: list[Check] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"id": self.case.id, "criterion": self.case.criterion, "description": self.case.description,
                "passed": self.passed, "error": self.error, "checks": [c.to_dict() for c in self.checks]}


def _sets(sets) -> list[list[str]]:
    return [format_set(S) for S in sets]


def _family(sets) -> list[list[str]]:
    return sorted(_sets(sets), key=lambda s: (len(s), s))


# --- worked examples ------------------------------------------------------

def case_truncated_tent_orbit() -> list[Check]:
    F = builtin("truncated-tent-pair")
    orb = deleted_orbit(F, Q(2, 7))
    v = an.classify_periodic(F, Q(2, 7))
    return [
        check("deleted orbit of 2/7", [["4/7", "1"], ["0", "6/7", "1"], ["0", "2/7", "1"], ["0", "4/7", "1"]],
              _sets(orb.sets)),
        check("preperiod, cycle", [1, 3], [orb.preperiod, orb.cycle]),
        check("classification", ["periodic", 4], [v.status, v.period]),
    ]


def case_truncated_tent_classical() -> list[Check]:
    F = builtin("truncated-tent-pair")
    f1, f2 = F.maps
    v1 = an.classify_periodic_classical(f1, F.space, Q(2, 7))
    v2 = an.classify_periodic_classical(f2, F.space, Q(2, 7))
    tail2 = [str(f2(x)) for x in v2.orbit]
    return [
        check("f1 orbit of 2/7", ["4/7", "1", "1"], [str(x) for x in v1.orbit]),
        check("f1 verdict", "not_periodic", v1.status),
        check("f2 orbit alternates 1, 0", ["1", "0", "1"], [str(x) for x in v2.orbit]),
        check("f2 keeps alternating", ["0", "1", "0"], tail2),
        check("f2 verdict", "not_periodic", v2.status),
    ]


def case_sequence_space_orbit() -> list[Check]:
    F = builtin("seq-space")
    f1, f2 = F.maps
    rec = orbit(F, 1, 4)
    v = an.classify_periodic(F, 1, max_steps=100)
    return [
        check("classical periods of 1", [3, 3], [an.classify_periodic_classical(f, F.space, 1).period for f in (f1, f2)]),
        check("F-orbit prefix", [["1/4", "1/2"], ["1/5", "1/3"], ["1/6", "1"], ["1/7", "1/4", "1/2"]], _sets(rec.sets)),
        check_true("not periodic within budget 100", not v.is_periodic, v.status),
    ]


def case_rot3_ran() -> list[Check]:
    F = builtin("rot3-pair")
    ran = an.enumerate_ran_finite(F)
    rep = an.is_transitive_finite(F)
    U, family = rep.counterexample or (None, None)
    return [
        check("Ran(F)", _family([(1, 2), (0, 2), (0, 1), (0, 1, 2)]), _family(ran.sets)),
        check("transitivity", "not_transitive", rep.verdict),
        check("counterexample", [["0"], [["0", "2"]]], [[str(p) for p in U.points], _sets(family)] if U else None),
        check("f1, f2 classically transitive", [True, True],
              [an.is_transitive_classical_finite(f, F.space) for f in F.maps]),
    ]


def case_binary_endpoints() -> list[Check]:
    F = builtin("binary-endpoints")
    return [
        check("Ran(F)", [["0", "1"]], _sets(an.enumerate_ran_finite(F).sets)),
        check("transitivity", "transitive", an.is_transitive_finite(F).verdict),
    ]


def case_tent_pair_sensitivity() -> list[Check]:
    F = builtin("tent-pair")
    f1, f2 = F.maps
    balls = an.seeded_balls(F.space, 20, Q(1, 32), seed=0)
    rep = an.sensitivity_scan(F, Q(127, 256), balls, horizon=30, seed=0)
    found = [o.witness is not None for o in rep.outcomes]
    strong = [o.witness is not None and o.witness.distance >= Q(1, 2) for o in rep.outcomes]
    verified = [o.witness is not None and an.verify_sensitivity_witness(F, Q(127, 256), o.open_set, o.witness)
                for o in rep.outcomes]
    rng = random.Random("tent-pair")
    identity_ok = structure_ok = oracle_ok = True
    for k in range(200):
        q = rng.randint(1, 1000)
        x = Q(rng.randint(0, q), q)
        a, b, S = x, x, (x,)
        for n in range(1, 21):
            a, b, S = f1(a), f2(b), image_set(F, S)
            identity_ok &= a + b == 1
            structure_ok &= S == make_set([a, 1 - a])
            if k < 20 and n <= 10:
                oracle_ok &= brute_force_iterate(F, x, n) == S
    return [
        check("witness in every ball", [True] * 20, found),
        check("every witness has d_H >= 1/2", [True] * 20, strong),
        check("every witness re-verifies", [True] * 20, verified),
        check_true("f1^n + f2^n = 1 (200 rationals, n <= 20)", identity_ok),
        check_true("F^n(x) = {f1^n(x), 1 - f1^n(x)}", structure_ok),
        check_true("word enumeration equals iterated set (n <= 10)", oracle_ok),
    ]


def case_truncated_tent_sensitivity() -> list[Check]:
    F = builtin("truncated-tent-pair")
    balls = an.seeded_balls(F.space, 20, Q(1, 32), seed=0)
    rep = an.sensitivity_scan(F, Q(1, 4), balls, horizon=30, seed=0)
    f1_alone = an.sensitivity_scan(F.single(1), Q(1, 4), [an.Ball(Q(3, 4), Q(1, 4))], horizon=50)
    f2_alone = an.sensitivity_scan(F.single(2), Q(1, 4), [an.Ball(Q(1, 4), Q(1, 4))], horizon=50)
    return [
        check("F verdict", "witnessed-for-all-tested-sets", rep.verdict),
        check_true("F witnesses re-verify",
                   all(an.verify_sensitivity_witness(F, Q(1, 4), o.open_set, o.witness) for o in rep.outcomes if o.witness)),
        check("f1 on (1/2,1): max distance", "0", str(f1_alone.outcomes[0].max_distance)),
        check("f2 on (0,1/2): max distance", "0", str(f2_alone.outcomes[0].max_distance)),
        check("f1 witness", None, f1_alone.outcomes[0].witness),
        check("f2 witness", None, f2_alone.outcomes[0].witness),
    ]


def case_circle_expansion() -> list[Check]:
    F = builtin("circle-23")
    cfg = an.ExpansionCheckConfig(Q(3, 2), samples=500, max_gap=Q(1, 6), wrap_guard=True, seed=0)
    pairs = an.sample_expansion_pairs(F, cfg)
    res = an.expansion_check(F, cfg, pairs)
    gaps_ok = all(0 < F.space.distance(x, y) < Q(1, 6) for x, y in pairs)
    anti = an.expansion_check(F, an.ExpansionCheckConfig(Q(3, 2), wrap_guard=False), [(Q(0), Q(1, 2))])
    return [
        check("pairs checked", 500, res.checked),
        check_true("all pairs have 0 < arc distance < 1/6", gaps_ok),
        check("verdict", "holds-on-samples", res.verdict),
        check_true("margin > 0", res.margin is not None and res.margin > 0, str(res.margin)),
        check("antipodal pair without guard", "fails", anti.verdict),
    ]


def case_collapse_doubling_devaney() -> list[Check]:
    F = builtin("collapse-doubling")
    cfg = an.DevaneyConfig(seed=1, transitivity_pairs=10, transitivity_epsilon=Q(1, 100), transitivity_horizon=40,
                           density_epsilon=Q(1, 50), density_max_denominator=101, density_odd_only=True,
                           sensitivity_delta=Q(1, 5), sensitivity_balls=20)
    rep = an.devaney_report(F, cfg)
    tw = rep.transitivity.witnesses
    f2 = F.maps[1]
    classical_ok = all(an.classify_periodic_classical(f2, F.space, p).is_periodic
                       for p in rep.density.nearest if p is not None)
    return [
        check("label", "evidence-for-chaos", rep.label),
        check("transitivity pairs witnessed", [True] * 10, [w is not None for _, _, w in tw]),
        check_true("transitivity witnesses re-verify",
                   all(an.verify_transitivity_witness(F, U, T, Q(1, 100), w) for U, T, w in tw if w)),
        check("periodic density coverage", "1", str(rep.density.coverage)),
        check_true("covering points are classically f2-periodic", classical_ok),
        check("sensitivity balls witnessed", [True] * 20, [o.witness is not None for o in rep.sensitivity.outcomes]),
        check_true("sensitivity witnesses re-verify",
                   all(an.verify_sensitivity_witness(F, Q(1, 5), o.open_set, o.witness)
                       for o in rep.sensitivity.outcomes if o.witness)),
    ]


def case_degenerate_identity() -> list[Check]:
    F = MultiMapSystem(Space.interval(), (PiecewiseLinear.of((0, 0), (1, 1)),), "identity")
    pts = [Q(k, 7) for k in range(8)]
    rep = an.devaney_report(builtin("identity-pair"))
    return [
        check("every sampled point fixed", ["fixed"] * 8, [an.classify_periodic(F, x).status for x in pts]),
        check("orbit of 1/3", [["1/3"]] * 3, _sets(orbit(F, Q(1, 3), 3).sets)),
        check_true("non-expanding certificate", an.nonexpanding(F)),
        check("identity pair label", "refuted(sensitivity)", rep.label),
    ]


# --- property suites --------------------------------------------------------

def random_pwl(rng: random.Random, pieces: int = 3, den: int = 8) -> PiecewiseLinear:
    xs = sorted({Q(rng.randint(1, den - 1), den) for _ in range(pieces - 1)})
    xs = [Q(0)] + xs + [Q(1)]
    return PiecewiseLinear(tuple((x, Q(rng.randint(0, den), den)) for x in xs))


def random_system(rng: random.Random) -> MultiMapSystem:
    """A random system on one of the four space kinds (two maps unless finite)."""
    kind = rng.choice(["finite", "interval", "circle", "seq"])
    if kind == "finite":
        return generate(GeneratorSpec("finite_random", seed=rng.randrange(10 ** 9), size=rng.randint(1, 6),
                                      maps=rng.randint(1, 3)))
    if kind == "interval":
        return MultiMapSystem(Space.interval(), (random_pwl(rng), random_pwl(rng)))
    if kind == "circle":
        return MultiMapSystem(Space.circle(), tuple(
            CircleAffine(rng.randint(-3, 3), Q(rng.randrange(12), 12)) for _ in range(2)))
    return builtin("seq-space")


def random_set(rng: random.Random, space: Space, size: int) -> tuple:
    return make_set(an.random_point(space, rng, 24) for _ in range(max(1, size)))


def _hausdorff_oracle(space, A, B):
    d = space.distance
    return max(max(min(d(a, b) for b in B) for a in A), max(min(d(a, b) for a in A) for b in B))


def suite_hausdorff(cases: int = 1000, seed: int = 0) -> list[Check]:
    rng = random.Random(f"hausdorff:{seed}")
    bad_axiom = bad_oracle = bad_iso = 0
    for _ in range(cases):
        space = rng.choice([Space.interval(), Space.circle(), Space.seq(), Space.finite(rng.randint(1, 5))])
        A, B, C = (random_set(rng, space, rng.randint(1, 4)) for _ in range(3))
        dab, dba = hausdorff(space, A, B), hausdorff(space, B, A)
        dac, dbc = hausdorff(space, A, C), hausdorff(space, B, C)
        ok = (dab == 0) == (A == B) and dab == dba and dac <= dab + dbc and hausdorff(space, A, A) == 0
        bad_axiom += not ok
        bad_oracle += dab != _hausdorff_oracle(space, A, B)
        x, y = an.random_point(space, rng, 24), an.random_point(space, rng, 24)
        bad_iso += hausdorff(space, (x,), (y,)) != space.distance(x, y)
    return [check("Hausdorff metric axioms: failures", 0, bad_axiom),
            check("Hausdorff equals max-min oracle: failures", 0, bad_oracle),
            check("singleton isometry: failures", 0, bad_iso)]


def suite_orbits(cases: int = 1000, seed: int = 0) -> list[Check]:
    rng = random.Random(f"orbits:{seed}")
    bad_rec = bad_union = bad_card = 0
    for _ in range(cases):
        F = random_system(rng)
        x = an.random_point(F.space, rng, 24)
        n = rng.randint(1, 6)
        rec = orbit(F, x, n)
        for k in range(1, rec.steps):
            bad_rec += rec.sets[k] != image_set(F, rec.sets[k - 1])
        bad_card += any(len(S) > len(F) ** k for k, S in enumerate(rec.sets, start=1))
        A = random_set(rng, F.space, rng.randint(1, 4))
        B = random_set(rng, F.space, rng.randint(1, 4))
        bad_union += image_set(F, set_union(A, B)) != set_union(image_set(F, A), image_set(F, B))
    return [check("orbit recursion S_{n+1} = F(S_n): failures", 0, bad_rec),
            check("union additivity: failures", 0, bad_union),
            check("cardinality bound |S_n| <= m^n: failures", 0, bad_card)]


def suite_fixed_points(systems: int = 200, seed: int = 0) -> list[Check]:
    rng = random.Random(f"fixed:{seed}")
    bad = 0
    for _ in range(systems):
        F = generate(GeneratorSpec("finite_random", seed=rng.randrange(10 ** 9), size=rng.randint(1, 6),
                                   maps=rng.randint(1, 3)))
        for x in F.space.points():
            common = all(f(x) == x for f in F.maps)
            status = an.classify_periodic(F, x).status
            bad += not (an.is_fixed_point(F, x) == common == (status == "fixed"))
    return [check("fixed point iff common fixed point iff status fixed: failures", 0, bad)]


def _cycle_point(f, space, x):
    v = an.classify_periodic_classical(f, space, x)
    assert v.status in ("fixed", "periodic", "not_periodic")
    return v.orbit[-1]  # the first repeated value lies on the cycle


def suite_commuting(systems: int = 100, seed: int = 0) -> list[Check]:
    rng = random.Random(f"commuting:{seed}")
    bad = not_yes = 0
    for k in range(systems):
        F = generate(GeneratorSpec("commuting_rotations", seed=rng.randrange(10 ** 9), max_denominator=12))
        not_yes += commutes(F, 1, 2).verdict != "yes"
        q = rng.randint(1, 30)
        p = Q(rng.randrange(q), q)
        bad += not an.classify_periodic(F, p).is_periodic
    # commuting table pairs: a random table and one of its powers
    tables = 0
    while tables < systems:
        size = rng.randint(1, 6)
        f = FiniteTable(tuple(rng.randrange(size) for _ in range(size)))
        g_images = list(range(size))
        for _ in range(rng.randint(0, 4)):
            g_images = [f(i) for i in g_images]
        F = MultiMapSystem(Space.finite(size), (f, FiniteTable(tuple(g_images))))
        if commutes(F, 1, 2).verdict != "yes":
            not_yes += 1
            continue
        common = [x for x in F.space.points()
                  if all(an.classify_periodic_classical(h, F.space, x).is_periodic for h in F.maps)]
        if not common:
            continue
        tables += 1
        bad += not all(an.classify_periodic(F, x).is_periodic for x in common)
    return [check("commuting systems: commutation not confirmed", 0, not_yes),
            check("common periodic point of commuting maps is F-periodic: failures", 0, bad)]


def suite_constant_collapse(systems: int = 100, seed: int = 0) -> list[Check]:
    rng = random.Random(f"collapse:{seed}")
    bad_periodic = bad_shape = 0
    for k in range(systems):
        carrier = "circle" if k % 2 == 0 else "finite"
        F = generate(GeneratorSpec("constant_plus_map", seed=rng.randrange(10 ** 9), carrier=carrier,
                                   size=rng.randint(1, 6), max_denominator=12))
        f1, f2 = F.maps
        c = f1(F.space.point(0))
        p = _cycle_point(f2, F.space, an.random_point(F.space, rng, 30))
        v = an.classify_periodic(F, p)
        bad_periodic += not v.is_periodic
        y = p
        for S in v.orbit.sets:
            y = f2(y)
            bad_shape += S != make_set([c, y])
    return [check("f1 constant, f2(c) = c, p f2-periodic => F-periodic: failures", 0, bad_periodic),
            check("deleted-orbit sets are {c, f2^k(p)}: failures", 0, bad_shape)]


def suite_degeneracy(systems: int = 100, seed: int = 0) -> list[Check]:
    rng = random.Random(f"degeneracy:{seed}")
    bad_period = bad_trans = bad_relation = 0
    for k in range(systems):
        size = rng.randint(1, 6)
        if k % 2:
            images = list(range(size))
            rng.shuffle(images)
        else:
            images = [rng.randrange(size) for _ in range(size)]
        f = FiniteTable(tuple(images))
        F = MultiMapSystem(Space.finite(size), (f,))
        for x in F.space.points():
            mv, cv = an.classify_periodic(F, x), an.classify_periodic_classical(f, F.space, x)
            bad_period += mv.status != cv.status or (cv.is_periodic and mv.period != cv.period)
        set_valued = an.is_transitive_finite(F).verdict == "transitive"
        classical = an.is_transitive_classical_finite(f, F.space)
        if len(set(images)) == size:
            bad_trans += set_valued != classical
        else:
            # Ran({f}) only holds singletons of f(X), so the notions part ways when f is not onto
            image = set(images)
            covers = all(image <= {S[0] for S in deleted_orbit(F, u).sets} for u in F.space.points())
            bad_relation += classical or set_valued != covers
    return [check("single map: periodicity agrees with classical: failures", 0, bad_period),
            check("single surjective map: transitivity agrees with classical: failures", 0, bad_trans),
            check("single non-surjective map: set-valued transitivity = orbits cover f(X): failures", 0, bad_relation)]


def case_properties() -> list[Check]:
    return (suite_hausdorff() + suite_orbits() + suite_fixed_points() + suite_commuting()
            + suite_constant_collapse() + suite_degeneracy())


def case_oracle_words(random_systems: int = 50, max_n: int = 10, seed: int = 0) -> list[Check]:
    rng = random.Random(f"words:{seed}")
    systems = [builtin(name) for name in builtin_names()]
    while len(systems) < len(builtin_names()) + random_systems:
        systems.append(random_system(rng))
    bad = compared = 0
    for F in systems:
        x = an.random_point(F.space, rng, 24)
        # keep the word count (#maps)^n near 2^10
        top = min(max_n, int(math.log(2 ** max_n, max(2, len(F)))))
        S = (x,)
        for n in range(1, top + 1):
            S = image_set(F, S)
            compared += 1
            bad += brute_force_iterate(F, x, n) != S
    return [check("word enumeration vs iterated image_set: mismatches", 0, bad),
            check_true("comparisons made", compared > 0, compared)]


CASES = [
    Case("truncated-tent-orbit", 1, "deleted orbit of 2/7 under the truncated tent pair; period 4", case_truncated_tent_orbit),
    Case("truncated-tent-classical", 2, "2/7 is periodic for neither f1 nor f2", case_truncated_tent_classical),
    Case("sequence-space-orbit", 3, "1 has period 3 for f1 and f2 but is not F-periodic within budget", case_sequence_space_orbit),
    Case("rot3-ran", 4, "Ran(F) of the 3-cycle pair and the non-transitivity counterexample", case_rot3_ran),
    Case("binary-endpoints-ran", 5, "two constant maps on {0,1}: Ran(F) = {{0,1}}, transitive", case_binary_endpoints),
    Case("tent-pair-sensitivity", 6, "tent pair: witnesses with d_H = 1/2, f1^n + f2^n = 1", case_tent_pair_sensitivity),
    Case("truncated-tent-sensitivity", 7, "truncated tent pair sensitive, f1 and f2 alone are not", case_truncated_tent_sensitivity),
    Case("circle-expansion", 8, "circle maps 2t, 3t expand by 3/2 on no-wrap pairs", case_circle_expansion),
    Case("collapse-doubling-devaney", 9, "constant 0 plus doubling: every Devaney clause witnessed", case_collapse_doubling_devaney),
    Case("properties", 10, "seeded property suites", case_properties),
    Case("oracle-words", 11, "word enumeration oracle equals iterated image sets", case_oracle_words),
    Case("degenerate-identity", None, "single identity map: fixed points everywhere, not sensitive",
         case_degenerate_identity),
]


def case_ids() -> list[str]:
    return [c.id for c in CASES]


def run_case(case: Case) -> CaseResult:
    result = CaseResult(case)
    try:
        result.checks = case.run()
    except Exception as exc:  # a crashing case is reported as a failure, not raised
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def select(case_id: str) -> list[Case]:
    if case_id == "all":
        return list(CASES)
    chosen = [c for c in CASES if c.id == case_id]
    if not chosen:
        from .space import InvalidInput
        raise InvalidInput(f"unknown repro case {case_id!r}; available: all, {', '.join(case_ids())}")
    return chosen
