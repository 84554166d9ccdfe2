"""Dynamical properties of multi-map systems: decision procedures where the space
is finite, exact-witness searches where it is not.

Every witness returned by a scan is an exact object (rational points, an
iterate count, a rational distance) and can be re-checked with the matching
``verify_*`` function independently of the sampler that found it.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .maps import CircleAffine, lipschitz_constant
from .setdyn import (
    DeletedOrbitSummary,
    PointSet,
    deleted_orbit,
    format_set,
    hausdorff,
    image_set,
    iterate_sets,
    make_set,
)
from .space import HALF, InvalidInput, Point, Space, UnsupportedOperation, ZERO, format_rational, to_rational


def _q(value) -> str:
    return format_rational(value)


def _approx(value) -> float:
    return float(value)


# --- open sets and sampling -------------------------------------------------

@dataclass(frozen=True)
class Ball:
    """Open ball ``{x : d(center, x) < radius}``."""

    center: Point
    radius: Fraction

    def contains(self, space: Space, x: Point) -> bool:
        return space.distance(self.center, x) < self.radius

    def to_dict(self) -> dict:
        return {"type": "ball", "center": _q(self.center), "radius": _q(self.radius)}


@dataclass(frozen=True)
class Subset:
    """An explicit set of points; open only in a finite (discrete) space."""

    points: tuple

    def contains(self, space: Space, x: Point) -> bool:
        return x in self.points

    def to_dict(self) -> dict:
        return {"type": "subset", "points": [_q(p) for p in self.points]}


OpenSet = Union[Ball, Subset]


def _check_open_set(space: Space, U: OpenSet) -> OpenSet:
    if isinstance(U, Ball):
        r = to_rational(U.radius)
        if r <= 0:
            raise InvalidInput("ball radius must be positive")
        return Ball(space.point(U.center), r)
    if isinstance(U, Subset):
        if not space.is_finite:
            raise InvalidInput(f"explicit point subsets are open only in finite spaces, not {space}")
        if not U.points:
            raise InvalidInput("open sets must be nonempty")
        return Subset(make_set(U.points, space))
    raise InvalidInput(f"not an open set: {U!r}")


@dataclass(frozen=True)
class Sampler:
    """Deterministic candidate points inside an open set.

    Order: the ball center, then dyadic rationals ``k/2^j`` by increasing depth
    ``j <= dyadic_depth`` (at most ``max_dyadic``, evenly thinned at the last
    depth), then ``random_points`` seeded rationals with denominator at most
    ``max_denominator``. Finite spaces ignore all of this and use every point.
    """

    dyadic_depth: int = 10
    max_dyadic: int = 32
    random_points: int = 8
    max_denominator: int = 97

    def points(self, space: Space, U: OpenSet, rng: random.Random) -> list[Point]:
        U = _check_open_set(space, U)
        if space.is_finite:
            if isinstance(U, Subset):
                return list(U.points)
            return [U.center] + [x for x in space.points() if x != U.center and U.contains(space, x)]
        if space.kind == "seq":
            return self._seq_points(space, U)
        return self._line_points(space, U, rng)

    def _admit(self, space, U, x, seen, out):
        if space.kind == "circle":
            x = x % 1
        if x in seen or not space.contains(x) or not U.contains(space, x):
            return False
        seen.add(x)
        out.append(x)
        return True

    def _line_points(self, space, U: Ball, rng) -> list[Point]:
        c, r = U.center, U.radius
        out, seen = [c], {c}
        budget = self.max_dyadic
        for j in range(1, self.dyadic_depth + 1):
            if budget <= 0:
                break
            den = 2 ** j
            lo, hi = math.ceil((c - r) * den), math.floor((c + r) * den)
            fresh = []
            for k in range(lo, hi + 1):
                if k % 2:
                    x = Fraction(k, den)
                    x = x % 1 if space.kind == "circle" else x
                    if x not in seen and space.contains(x) and U.contains(space, x):
                        fresh.append(x)
            if len(fresh) > budget:
                step = len(fresh) / budget
                fresh = [fresh[int(i * step)] for i in range(budget)]
            for x in fresh:
                if self._admit(space, U, x, seen, out):
                    budget -= 1
        added = 0
        for _ in range(self.random_points * 20):
            if added >= self.random_points:
                break
            q = rng.randint(2, max(2, self.max_denominator))
            lo, hi = math.ceil((c - r) * q), math.floor((c + r) * q)
            if lo > hi:
                continue
            if self._admit(space, U, Fraction(rng.randint(lo, hi), q), seen, out):
                added += 1
        return out

    def _seq_points(self, space, U: Ball) -> list[Point]:
        c, r = U.center, U.radius
        out, seen = [c], {c}
        if U.contains(space, ZERO):
            self._admit(space, U, ZERO, seen, out)
        cap = self.max_dyadic + self.random_points
        n = math.floor(1 / (c + r)) + 1 if c + r > 0 else 1
        while len(out) < cap + 1:
            x = Fraction(1, n)
            if c - r > 0 and x <= c - r:
                break
            self._admit(space, U, x, seen, out)
            n += 1
        return out


DEFAULT_SAMPLER = Sampler()
# large denominators spread doubling-type orbits, which transitivity searches rely on
TRANSITIVITY_SAMPLER = Sampler(random_points=32, max_denominator=2 ** 20 + 1)


def _rng(seed, index) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_point(space: Space, rng: random.Random, max_denominator: int = 64) -> Point:
    if space.is_finite:
        return rng.randrange(space.size)
    if space.kind == "seq":
        n = rng.randint(0, max_denominator)
        return ZERO if n == 0 else Fraction(1, n)
    q = rng.randint(1, max_denominator)
    top = q if space.kind == "interval" else q - 1
    return Fraction(rng.randint(0, top), q)


def seeded_balls(space: Space, count: int, radius, seed: int = 0, max_denominator: int = 64) -> list[Ball]:
    """``count`` balls of the given radius with seeded rational centers."""
    rng = random.Random(f"balls:{seed}")
    radius = to_rational(radius)
    return [Ball(random_point(space, rng, max_denominator), radius) for _ in range(count)]


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs and jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


# --- fixed and periodic points ----------------------------------------------

def is_fixed_point(system, x) -> bool:
    """True iff every map fixes ``x``, i.e. ``F(x) = {x}``."""
    x = system.space.point(x)
    return all(f(x) == x for f in system.maps)


@dataclass
class PeriodicityVerdict:
    status: str  # "fixed" | "periodic" | "not_periodic" | "unknown"
    period: int | None
    witness_m: int | None
    orbit: DeletedOrbitSummary

    @property
    def is_periodic(self) -> bool:
        return self.status in ("fixed", "periodic")

    def to_dict(self, space: Space) -> dict:
        return {
            "status": self.status,
            "period": self.period,
            "witness_m": self.witness_m,
            "deleted_orbit": self.orbit.to_dict(space),
        }


def classify_periodic(system, x, max_steps: int | None = None, max_set_size: int | None = None) -> PeriodicityVerdict:
    """Periodicity of ``x`` for F.

    The period is the number of distinct deleted-orbit sets, transient ones
    included. Non-periodicity is only reported once the set sequence has been
    seen to cycle without ever containing ``x``; an orbit that never repeats
    within budget is ``unknown``.
    """
    x = system.space.point(x)
    orb = deleted_orbit(system, x, max_steps, max_set_size)
    if not orb.is_finite:
        return PeriodicityVerdict("unknown", None, None, orb)
    # the sequence is eventually periodic, so m <= p + c settles membership for all m
    for m, S in enumerate(orb.sets, start=1):
        if x in S:
            if orb.sets[0] == (x,):
                return PeriodicityVerdict("fixed", 1, 1, orb)
            return PeriodicityVerdict("periodic", len(orb.sets), m, orb)
    return PeriodicityVerdict("not_periodic", None, None, orb)


@dataclass
class ClassicalVerdict:
    status: str  # "fixed" | "periodic" | "not_periodic" | "unknown"
    period: int | None
    orbit: list  # x_1, x_2, ... up to the first repeat

    @property
    def is_periodic(self) -> bool:
        return self.status in ("fixed", "periodic")


def classify_periodic_classical(f, space: Space, x, budget: int = 10_000) -> ClassicalVerdict:
    """Single-map periodicity: least ``n`` with ``f^n(x) = x``."""
    x = space.point(x)
    seen = {x: 0}
    orbit = []
    y = x
    for k in range(1, budget + 1):
        y = f(y)
        orbit.append(y)
        if y == x:
            return ClassicalVerdict("fixed" if k == 1 else "periodic", k, orbit)
        if y in seen:
            return ClassicalVerdict("not_periodic", None, orbit)
        seen[y] = k
    return ClassicalVerdict("unknown", None, orbit)


def is_transitive_classical_finite(f, space: Space) -> bool:
    """A single map on a finite discrete space is transitive iff every point reaches every point."""
    if not space.is_finite:
        raise UnsupportedOperation("exact classical transitivity needs a finite space")
    pts = space.points()
    for u in pts:
        reached, y = set(), u
        for _ in range(space.size):
            y = f(y)
            reached.add(y)
        if len(reached) != space.size:
            return False
    return True


# --- Ran(F) and transitivity on finite spaces -------------------------------

@dataclass
class RanEnumeration:
    sets: list[PointSet]  # first-occurrence order over u = 0, 1, ...
    exact: bool
    visited: dict[Point, list[PointSet]]

    def to_dict(self, space: Space) -> dict:
        return {
            "exact": self.exact,
            "sets": [format_set(S) for S in self.sets],
            "visited": {_q(u): [format_set(S) for S in v] for u, v in self.visited.items()},
        }


def _require_finite(system, what: str):
    if not system.space.is_finite:
        raise UnsupportedOperation(
            f"{what} is exact only on finite spaces; {system.space} needs the sampled/witness variant"
        )


def _closure(system, u) -> list[PointSet]:
    # a k-point space has 2^k - 1 nonempty subsets, so this budget always closes the cycle
    orb = deleted_orbit(system, u, max_steps=2 ** system.space.size, max_set_size=system.space.size)
    assert orb.is_finite
    return orb.sets


def enumerate_ran_finite(system) -> RanEnumeration:
    """``Ran(F) = {F^n(x) : n >= 1, x in X}`` exactly, for a finite space."""
    _require_finite(system, "Ran(F) enumeration")
    visited = {u: _closure(system, u) for u in system.space.points()}
    ran = list(dict.fromkeys(S for sets in visited.values() for S in sets))
    return RanEnumeration(ran, True, visited)


def sample_ran(system, count: int, seed: int = 0, max_iterate: int = 5, max_denominator: int = 64) -> list[PointSet]:
    """Members ``F^k(v)`` of Ran(F) for seeded points ``v`` and ``1 <= k <= max_iterate``."""
    rng = random.Random(f"ran:{seed}")
    out = []
    for _ in range(count):
        v = random_point(system.space, rng, max_denominator)
        k = rng.randint(1, max_iterate)
        S = (v,)
        for _ in range(k):
            S = image_set(system, S)
        out.append(S)
    return out


@dataclass
class TransitivityWitness:
    u: Point
    n: int
    distance: Fraction

    def to_dict(self) -> dict:
        return {"u": _q(self.u), "n": self.n, "distance": _q(self.distance), "distance_approx": _approx(self.distance)}


@dataclass
class TransitivityReport:
    verdict: str  # "transitive" | "not_transitive" | "witnessed" | "inconclusive"
    counterexample: tuple[OpenSet, list[PointSet]] | None = None
    witnesses: list = field(default_factory=list)  # (U, target, witness or None)
    params: dict = field(default_factory=dict)
    ran: RanEnumeration | None = None

    @property
    def decided(self) -> bool:
        return self.verdict in ("transitive", "not_transitive", "witnessed")

    def to_dict(self, space: Space) -> dict:
        out = {"verdict": self.verdict, "params": self.params}
        if self.counterexample is not None:
            U, family = self.counterexample
            out["counterexample"] = {
                "U": U.to_dict(),
                "family": [format_set(S) for S in family],
                "search_bound": self.params.get("search_bound"),
            }
        if self.ran is not None:
            out["ran"] = [format_set(S) for S in self.ran.sets]
        if self.witnesses:
            out["pairs"] = [
                {"U": U.to_dict(), "target": format_set(T), "witness": w.to_dict() if w else None}
                for U, T, w in self.witnesses
            ]
        return out


def is_transitive_finite(system) -> TransitivityReport:
    """Exact transitivity on a finite space.

    Every subset is open, so it suffices to check singletons: F is transitive
    iff the sets visited from each point ``u`` (through cycle closure) include
    every member of Ran(F).
    """
    _require_finite(system, "transitivity decision")
    ran = enumerate_ran_finite(system)
    bound = max(len(v) for v in ran.visited.values())
    params = {"mode": "exact", "search_bound": bound}
    for u, sets in ran.visited.items():
        have = set(sets)
        for A in ran.sets:
            if A not in have:
                return TransitivityReport("not_transitive", (Subset((u,)), [A]), params=params, ran=ran)
    return TransitivityReport("transitive", params=params, ran=ran)


def transitivity_witness(system, U: OpenSet, target, epsilon, horizon: int = 40,
                         sampler: Sampler | None = None, seed=0, max_set_size: int = 4096) -> TransitivityWitness | None:
    """Search ``u`` in ``U`` and ``n <= horizon`` with ``d_H(F^n(u), target) < epsilon``."""
    space = system.space
    epsilon = to_rational(epsilon)
    if epsilon <= 0 or horizon < 1:
        raise InvalidInput("need epsilon > 0 and horizon >= 1")
    target = make_set(target, space)
    sampler = sampler or TRANSITIVITY_SAMPLER
    for u in sampler.points(space, U, _rng(seed, "transitivity")):
        for n, S in enumerate(iterate_sets(system, (u,)), start=1):
            if n > horizon or len(S) > max_set_size:
                break
            d = hausdorff(space, S, target)
            if d < epsilon:
                return TransitivityWitness(u, n, d)
    return None


def verify_transitivity_witness(system, U: OpenSet, target, epsilon, w: TransitivityWitness) -> bool:
    space = system.space
    U = _check_open_set(space, U)
    if not U.contains(space, w.u):
        return False
    S = (w.u,)
    for _ in range(w.n):
        S = image_set(system, S)
    d = hausdorff(space, S, make_set(target, space))
    return d == w.distance and d < to_rational(epsilon)


def transitivity_evidence(system, pairs: int = 10, epsilon="1/100", horizon: int = 40, radius="1/10",
                          seed: int = 0, sampler: Sampler | None = None, jobs: int = 1) -> TransitivityReport:
    """Witness-mode transitivity: seeded balls against seeded members of Ran(F).

    ``witnessed`` means every tested pair was connected; nothing is ever refuted
    on an infinite space.
    """
    space = system.space
    epsilon, radius = to_rational(epsilon), to_rational(radius)
    balls = seeded_balls(space, pairs, radius, seed)
    targets = sample_ran(system, pairs, seed)
    work = list(zip(balls, targets))

    def run(item):
        U, T = item
        return U, T, transitivity_witness(system, U, T, epsilon, horizon, sampler, seed)

    results = _pmap(run, work, jobs)
    params = {"mode": "witness", "pairs": pairs, "epsilon": _q(epsilon), "horizon": horizon,
              "radius": _q(radius), "seed": seed}
    verdict = "witnessed" if all(w is not None for _, _, w in results) else "inconclusive"
    return TransitivityReport(verdict, witnesses=results, params=params)


# --- sensitivity ------------------------------------------------------------

@dataclass
class SensitivityWitness:
    x: Point
    y: Point
    n: int
    distance: Fraction

    def to_dict(self) -> dict:
        return {"x": _q(self.x), "y": _q(self.y), "n": self.n,
                "distance": _q(self.distance), "distance_approx": _approx(self.distance)}


@dataclass
class SensitivityOutcome:
    open_set: OpenSet
    witness: SensitivityWitness | None
    max_distance: Fraction
    candidates: int
    steps: int

    def to_dict(self) -> dict:
        return {"open_set": self.open_set.to_dict(),
                "witness": self.witness.to_dict() if self.witness else None,
                "max_distance": _q(self.max_distance), "max_distance_approx": _approx(self.max_distance),
                "candidates": self.candidates, "steps": self.steps}


@dataclass
class SensitivityReport:
    delta: Fraction
    outcomes: list[SensitivityOutcome]
    verdict: str  # "witnessed-for-all-tested-sets" | "refuted-on-finite-space" | "inconclusive"
    seed: int
    horizon: int
    blocking_set: OpenSet | None = None

    def to_dict(self, space: Space) -> dict:
        out = {"seed": self.seed, "delta": _q(self.delta), "horizon": self.horizon, "verdict": self.verdict,
               "outcomes": [o.to_dict() for o in self.outcomes]}
        if self.blocking_set is not None:
            out["blocking_set"] = self.blocking_set.to_dict()
        return out


def _scan_open_set(system, delta, U, horizon, sampler, rng, max_set_size) -> SensitivityOutcome:
    space = system.space
    cands = sampler.points(space, U, rng)
    sets = [(x,) for x in cands]
    best = ZERO
    n_done = 0
    for n in range(1, horizon + 1):
        sets = [image_set(system, S) for S in sets]
        if any(len(S) > max_set_size for S in sets):
            break
        n_done = n
        # pairs with identical sets contribute 0; compare one representative per set
        reps: dict[PointSet, int] = {}
        for idx, S in enumerate(sets):
            reps.setdefault(S, idx)
        order = list(reps.items())
        for b in range(1, len(order)):
            Sb, jb = order[b]
            for a in range(b):
                Sa, ia = order[a]
                d = hausdorff(space, Sa, Sb)
                if d > best:
                    best = d
                if d > delta:
                    return SensitivityOutcome(U, SensitivityWitness(cands[ia], cands[jb], n, d), best, len(cands), n)
    return SensitivityOutcome(U, None, best, len(cands), n_done)


def _scan_finite_open_set(system, delta, U) -> SensitivityOutcome:
    space = system.space
    pts = Sampler().points(space, U, random.Random(0))
    orbs = {x: deleted_orbit(system, x, max_steps=2 ** space.size, max_set_size=space.size) for x in pts}
    best = ZERO
    bound = 0
    for b in range(1, len(pts)):
        for a in range(b):
            ox, oy = orbs[pts[a]], orbs[pts[b]]
            # the pair sequence is periodic after max preperiod with period lcm of the cycles
            limit = max(ox.preperiod, oy.preperiod) + math.lcm(ox.cycle, oy.cycle)
            bound = max(bound, limit)
            for n in range(1, limit + 1):
                d = hausdorff(space, ox.set_at(n), oy.set_at(n))
                best = max(best, d)
                if d > delta:
                    return SensitivityOutcome(U, SensitivityWitness(pts[a], pts[b], n, d), best, len(pts), n)
    return SensitivityOutcome(U, None, best, len(pts), bound)


def sensitivity_scan(system, delta, open_sets: Sequence[OpenSet] | None = None, horizon: int = 30,
                     sampler: Sampler | None = None, seed: int = 0, jobs: int = 1,
                     max_set_size: int = 4096) -> SensitivityReport:
    """Look for ``x, y`` in each open set and ``n <= horizon`` with ``d_H(F^n x, F^n y) > delta``.

    On a finite space every listed open set is searched exhaustively and the
    verdict is ``refuted-on-finite-space``: a singleton open set only offers
    ``x = y``. Elsewhere the verdict is ``witnessed-for-all-tested-sets`` or
    ``inconclusive``. Default open sets are 20 seeded balls of radius 1/32, or
    on finite spaces every singleton plus the whole space.
    """
    space = system.space
    delta = to_rational(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    if open_sets is None:
        if space.is_finite:
            open_sets = [Subset((x,)) for x in space.points()] + [Subset(tuple(space.points()))]
        else:
            open_sets = seeded_balls(space, 20, Fraction(1, 32), seed)
    open_sets = [_check_open_set(space, U) for U in open_sets]

    if space.is_finite:
        outcomes = _pmap(lambda U: _scan_finite_open_set(system, delta, U), open_sets, jobs)
        return SensitivityReport(delta, outcomes, "refuted-on-finite-space", seed, horizon,
                                 blocking_set=Subset((space.points()[0],)))

    sampler = sampler or DEFAULT_SAMPLER
    items = list(enumerate(open_sets))
    outcomes = _pmap(lambda item: _scan_open_set(system, delta, item[1], horizon, sampler,
                                                 _rng(seed, item[0]), max_set_size), items, jobs)
    verdict = "witnessed-for-all-tested-sets" if all(o.witness for o in outcomes) else "inconclusive"
    return SensitivityReport(delta, outcomes, verdict, seed, horizon)


def verify_sensitivity_witness(system, delta, U: OpenSet, w: SensitivityWitness) -> bool:
    space = system.space
    U = _check_open_set(space, U)
    if not (U.contains(space, w.x) and U.contains(space, w.y)):
        return False
    A, B = (w.x,), (w.y,)
    for _ in range(w.n):
        A, B = image_set(system, A), image_set(system, B)
    d = hausdorff(space, A, B)
    return d == w.distance and d > to_rational(delta)


def nonexpanding(system) -> bool:
    """True when every map is 1-Lipschitz, so ``d_H(F^n x, F^n y) <= d(x, y)`` for all n.

    Such a system cannot be sensitive: a ball of radius below ``delta/2`` never separates.
    """
    consts = [lipschitz_constant(f, system.space) for f in system.maps]
    return not system.space.is_finite and all(L is not None and L <= 1 for L in consts)


# --- expansion hypothesis ---------------------------------------------------

@dataclass(frozen=True)
class ExpansionCheckConfig:
    lam: Fraction
    samples: int = 500
    max_gap: Fraction | None = None
    wrap_guard: bool = True
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", to_rational(self.lam))
        if self.lam <= 1:
            raise InvalidInput("expansion factor must exceed 1")
        if self.max_gap is not None:
            object.__setattr__(self, "max_gap", to_rational(self.max_gap))


@dataclass
class ExpansionPair:
    x: Point
    y: Point
    i0: int
    value: Fraction  # min_j d(f_i0(x), f_j(y))
    margin: Fraction  # value - lam * d(x, y)

    def to_dict(self) -> dict:
        return {"x": _q(self.x), "y": _q(self.y), "i0": self.i0, "value": _q(self.value),
                "margin": _q(self.margin), "margin_approx": _approx(self.margin)}


@dataclass
class ExpansionResult:
    verdict: str  # "holds-on-samples" | "fails"
    lam: Fraction
    checked: int
    skipped: int
    margin: Fraction | None  # smallest margin among checked pairs
    worst: ExpansionPair | None
    witness: ExpansionPair | None = None  # first failing pair

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "lambda": _q(self.lam), "checked": self.checked, "skipped": self.skipped,
                "margin": None if self.margin is None else _q(self.margin),
                "margin_approx": None if self.margin is None else _approx(self.margin),
                "worst": self.worst.to_dict() if self.worst else None,
                "witness": self.witness.to_dict() if self.witness else None}


def no_wrap(system, x: Point, y: Point) -> bool:
    """On the circle with affine maps: every image difference is below half a turn
    before reduction, so the arc metric agrees with the lifted difference."""
    if system.space.kind != "circle" or not all(isinstance(f, CircleAffine) for f in system.maps):
        return True
    if abs(x - y) > HALF:
        return False
    lifts = [(f.a * x + f.b, f.a * y + f.b) for f in system.maps]
    return all(abs(fx - gy) <= HALF for fx, _ in lifts for _, gy in lifts)


def expansion_margin(system, x: Point, y: Point, lam) -> ExpansionPair:
    """Best index ``i0`` (lowest among maximizers) of ``min_j d(f_i0(x), f_j(y))``."""
    space = system.space
    lam = to_rational(lam)
    ys = [g(y) for g in system.maps]
    best_i, best = None, None
    for i, f in enumerate(system.maps, start=1):
        fx = f(x)
        v = min(space.distance(fx, gy) for gy in ys)
        if best is None or v > best:
            best_i, best = i, v
    return ExpansionPair(x, y, best_i, best, best - lam * space.distance(x, y))


def expansion_check(system, config: ExpansionCheckConfig, pairs: Iterable[tuple[Point, Point]]) -> ExpansionResult:
    """Check ``min_j d(f_i0(x), f_j(y)) > lam d(x, y)`` for some ``i0`` on every given pair.

    With ``wrap_guard`` pairs for which :func:`no_wrap` fails are skipped.
    """
    space = system.space
    checked = skipped = 0
    worst = None
    for x, y in pairs:
        x, y = space.point(x), space.point(y)
        if config.wrap_guard and not no_wrap(system, x, y):
            skipped += 1
            continue
        checked += 1
        res = expansion_margin(system, x, y, config.lam)
        if worst is None or res.margin < worst.margin:
            worst = res
        if res.margin <= 0:
            return ExpansionResult("fails", config.lam, checked, skipped, res.margin, worst, res)
    if checked == 0:
        raise InvalidInput("no pair survived the wrap guard")
    return ExpansionResult("holds-on-samples", config.lam, checked, skipped, worst.margin, worst)


def default_max_gap(system) -> Fraction:
    if system.space.kind == "circle" and all(isinstance(f, CircleAffine) for f in system.maps):
        top = max(abs(f.a) for f in system.maps)
        return Fraction(1, 2 * top) if top else HALF
    return system.space.diameter() / 4


def sample_expansion_pairs(system, config: ExpansionCheckConfig,
                           open_set_pairs: Sequence[tuple[OpenSet, OpenSet]] | None = None,
                           max_denominator: int = 10 ** 6) -> list[tuple[Point, Point]]:
    """Seeded pairs of distinct points for :func:`expansion_check`.

    Without ``open_set_pairs``: ``x`` anywhere and ``0 < d(x, y) < max_gap``.
    With them: ``x`` in ``U`` and ``y`` in ``V``, spread evenly over the pairs.
    Guarded-out pairs are redrawn, so ``config.samples`` pairs come back
    whenever the guard admits enough of them.
    """
    space = system.space
    if space.is_finite:
        raise UnsupportedOperation("expansion pairs are sampled on continuous spaces only")
    rng = random.Random(f"expansion:{config.seed}")
    gap = config.max_gap or default_max_gap(system)
    out: list[tuple[Point, Point]] = []

    def draw_near(center, radius):
        q = rng.randint(max_denominator // 2, max_denominator)
        k = math.ceil(radius * q) - 1
        t = Fraction(rng.randint(-k, k), q)
        return center + t

    def admissible(x, y):
        if space.kind == "circle":
            x, y = x % 1, y % 1
        if not (space.contains(x) and space.contains(y)) or x == y:
            return None
        if space.distance(x, y) >= gap and open_set_pairs is None:
            return None
        if config.wrap_guard and not no_wrap(system, x, y):
            return None
        return x, y

    attempts = 0
    while len(out) < config.samples and attempts < 200 * config.samples:
        attempts += 1
        if open_set_pairs:
            U, V = open_set_pairs[len(out) % len(open_set_pairs)]
            pair = admissible(draw_near(U.center, U.radius), draw_near(V.center, V.radius))
            if pair and not (U.contains(space, pair[0]) and V.contains(space, pair[1])):
                pair = None
        else:
            x = random_point(space, rng, max_denominator)
            pair = admissible(x, draw_near(x, gap))
        if pair:
            out.append(pair)
    return out


# --- periodic density -------------------------------------------------------

def rational_candidates(space: Space, max_denominator: int, odd_only: bool = False) -> list[Point]:
    """Distinct rationals ``p/q`` of the space with ``q <= max_denominator`` (odd ``q`` only if asked)."""
    if space.is_finite:
        return space.points()
    if space.kind == "seq":
        return [ZERO] + [Fraction(1, n) for n in range(1, max_denominator + 1) if not odd_only or n % 2]
    out = set()
    for q in range(1, max_denominator + 1):
        if odd_only and q % 2 == 0:
            continue
        top = q if space.kind == "interval" else q - 1
        for p in range(top + 1):
            if math.gcd(p, q) == 1:
                out.add(Fraction(p, q))
    return sorted(out)


def epsilon_net(space: Space, epsilon) -> list[Point]:
    """Points such that every point of the space lies within ``epsilon`` of one of them."""
    epsilon = to_rational(epsilon)
    if space.is_finite:
        return space.points()
    if space.kind == "seq":
        return [ZERO] + [Fraction(1, n) for n in range(1, math.floor(1 / epsilon) + 1) if Fraction(1, n) > epsilon]
    count = math.ceil(1 / epsilon)
    if space.kind == "interval":
        return sorted({min(k * epsilon, Fraction(1)) for k in range(count + 1)})
    return [k * epsilon for k in range(count) if k * epsilon < 1]


@dataclass
class CoverageReport:
    epsilon: Fraction
    net: list[Point]
    nearest: list  # confirmed periodic point within epsilon of each net point, or None
    classified: dict  # candidate -> status, for every candidate actually classified

    @property
    def coverage(self) -> Fraction:
        return Fraction(sum(p is not None for p in self.nearest), len(self.net))

    @property
    def periodic_points(self) -> list[Point]:
        return sorted(p for p, s in self.classified.items() if s in ("fixed", "periodic"))

    def to_dict(self, space: Space) -> dict:
        return {"epsilon": _q(self.epsilon), "net_size": len(self.net), "coverage": _q(self.coverage),
                "coverage_approx": _approx(self.coverage), "classified": len(self.classified),
                "uncovered": [_q(z) for z, p in zip(self.net, self.nearest) if p is None],
                "periodic_points": [_q(p) for p in self.periodic_points]}


def periodic_density_scan(system, epsilon, candidates: Iterable[Point] | None = None, max_denominator: int = 101,
                          odd_only: bool = False, max_steps: int | None = None,
                          max_set_size: int | None = None) -> CoverageReport:
    """Fraction of an ``epsilon``-net lying within ``epsilon`` of a confirmed periodic point.

    Candidates near each net point are classified nearest-first and lazily, so
    only as many orbits are computed as needed to cover the net.
    """
    space = system.space
    epsilon = to_rational(epsilon)
    if epsilon <= 0:
        raise InvalidInput("epsilon must be positive")
    if candidates is None:
        candidates = rational_candidates(space, max_denominator, odd_only)
    candidates = [space.point(c) for c in candidates]
    net = epsilon_net(space, epsilon)
    classified: dict[Point, str] = {}
    nearest = []
    for z in net:
        near = sorted((space.distance(z, c), c) for c in candidates if space.distance(z, c) <= epsilon)
        found = None
        for _, c in near:
            if c not in classified:
                classified[c] = classify_periodic(system, c, max_steps, max_set_size).status
            if classified[c] in ("fixed", "periodic"):
                found = c
                break
        nearest.append(found)
    return CoverageReport(epsilon, net, nearest, classified)


# --- orbit distances used in diagnostics ------------------------------------

def point_to_orbit_union(space: Space, x: Point, orbit: DeletedOrbitSummary) -> Fraction:
    """``min d(x, z)`` over every point ``z`` of every deleted-orbit set."""
    return min(space.distance(x, z) for S in orbit.sets for z in S)


def point_to_orbit_sets(space: Space, x: Point, orbit: DeletedOrbitSummary) -> Fraction:
    """``min d_H({x}, S)`` over the deleted-orbit sets ``S``."""
    return min(hausdorff(space, (x,), S) for S in orbit.sets)


# --- Devaney composite ------------------------------------------------------

@dataclass(frozen=True)
class DevaneyConfig:
    seed: int = 1
    transitivity_pairs: int = 10
    transitivity_epsilon: Fraction = Fraction(1, 100)
    transitivity_horizon: int = 40
    transitivity_radius: Fraction = Fraction(1, 10)
    density_epsilon: Fraction = Fraction(1, 50)
    density_max_denominator: int = 101
    density_odd_only: bool = False
    sensitivity_delta: Fraction = Fraction(1, 5)
    sensitivity_balls: int = 20
    sensitivity_radius: Fraction = Fraction(1, 32)
    sensitivity_horizon: int = 30
    jobs: int = 1


@dataclass
class DevaneyReport:
    label: str
    clauses: dict  # clause -> "evidence" | "refuted" | "inconclusive"
    transitivity: TransitivityReport
    density: CoverageReport
    sensitivity: SensitivityReport
    nonexpanding: bool
    config: DevaneyConfig

    def to_dict(self, space: Space) -> dict:
        cfg = {k: (_q(v) if isinstance(v, Fraction) else v) for k, v in self.config.__dict__.items()}
        return {"seed": self.config.seed, "label": self.label, "clauses": self.clauses, "config": cfg,
                "nonexpanding_certificate": self.nonexpanding,
                "transitivity": self.transitivity.to_dict(space),
                "density": self.density.to_dict(space),
                "sensitivity": self.sensitivity.to_dict(space)}


CLAUSES = ("transitivity", "density", "sensitivity")


def devaney_report(system, config: DevaneyConfig | None = None) -> DevaneyReport:
    """Evidence for each Devaney clause and an overall label.

    The label is ``refuted(<clause>)`` for the first refuted clause in the order
    transitivity, density, sensitivity; ``evidence-for-chaos`` when every clause
    is witnessed; ``inconclusive`` otherwise.
    """
    config = config or DevaneyConfig()
    space = system.space
    clauses = {}

    if space.is_finite:
        trans = is_transitive_finite(system)
        clauses["transitivity"] = "evidence" if trans.verdict == "transitive" else "refuted"
    else:
        trans = transitivity_evidence(system, config.transitivity_pairs, config.transitivity_epsilon,
                                      config.transitivity_horizon, config.transitivity_radius,
                                      config.seed, jobs=config.jobs)
        clauses["transitivity"] = "evidence" if trans.verdict == "witnessed" else "inconclusive"

    density = periodic_density_scan(system, config.density_epsilon, max_denominator=config.density_max_denominator,
                                    odd_only=config.density_odd_only)
    if density.coverage == 1:
        clauses["density"] = "evidence"
    elif space.is_finite and "unknown" not in density.classified.values():
        clauses["density"] = "refuted"
    else:
        clauses["density"] = "inconclusive"

    if space.is_finite:
        sens = sensitivity_scan(system, config.sensitivity_delta, horizon=config.sensitivity_horizon,
                                seed=config.seed, jobs=config.jobs)
    else:
        balls = seeded_balls(space, config.sensitivity_balls, config.sensitivity_radius, config.seed)
        sens = sensitivity_scan(system, config.sensitivity_delta, balls, config.sensitivity_horizon,
                                seed=config.seed, jobs=config.jobs)
    certificate = nonexpanding(system)
    if sens.verdict == "refuted-on-finite-space" or certificate:
        clauses["sensitivity"] = "refuted"
    elif sens.verdict == "witnessed-for-all-tested-sets":
        clauses["sensitivity"] = "evidence"
    else:
        clauses["sensitivity"] = "inconclusive"

    refuted = [c for c in CLAUSES if clauses[c] == "refuted"]
    if refuted:
        label = f"refuted({refuted[0]})"
    elif all(clauses[c] == "evidence" for c in CLAUSES):
        label = "evidence-for-chaos"
    else:
        label = "inconclusive"
    return DevaneyReport(label, clauses, trans, density, sens, certificate, config)
