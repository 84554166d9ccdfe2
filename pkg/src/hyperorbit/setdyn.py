"""Finite sets in the hyperspace, the Hausdorff metric, and orbits ``F^n(x)``.

A finite set is represented canonically as a sorted, duplicate-free tuple of
points, so equal sets are equal tuples and can be used as dictionary keys.
"""
from __future__ import annotations

import bisect
import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .maps import evaluate_word
from .space import InvalidInput, Point, Space, format_rational

PointSet = tuple

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_SET_SIZE = 65_536
BUDGET_ENV = "HYPERORBIT_DEFAULT_BUDGET"


def default_max_steps() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_MAX_STEPS
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{BUDGET_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InvalidInput(f"{BUDGET_ENV} must be a positive integer, got {raw!r}")
    return value


def make_set(points: Iterable, space: Space | None = None) -> PointSet:
    """Canonical (sorted, deduplicated) form of a nonempty collection of points."""
    pts = list(points)
    if not pts:
        raise InvalidInput("a compact set must be nonempty")
    if space is not None:
        pts = [space.point(p) for p in pts]
    return tuple(sorted(set(pts)))


def format_set(S: PointSet) -> list[str]:
    return [format_rational(p) for p in S]


def set_union(*sets: PointSet) -> PointSet:
    return make_set(itertools.chain(*sets))


def image_set(system, S: Iterable[Point]) -> PointSet:
    """One step of the induced hyperspace map: ``{f_i(a) : a in S, every i}``."""
    maps = system.maps
    return tuple(sorted({f(a) for a in S for f in maps}))


def _nearest_sorted(space: Space, a, B: PointSet) -> Fraction:
    # B is sorted; only the neighbours of a's insertion point can be nearest
    # (cyclically so on the circle)
    k = bisect.bisect_left(B, a)
    if space.kind == "circle":
        idx = (k - 1, k % len(B))
    else:
        idx = [i for i in (k - 1, k) if 0 <= i < len(B)]
    return min(space.distance(a, B[i]) for i in idx)


def directed_hausdorff(space: Space, A: PointSet, B: PointSet) -> Fraction:
    """``max_{a in A} min_{b in B} d(a, b)``"""
    if space.is_finite:
        return Fraction(0) if set(A) <= set(B) else Fraction(1)
    return max(_nearest_sorted(space, a, B) for a in A)


def hausdorff(space: Space, A: PointSet, B: PointSet) -> Fraction:
    """Exact Hausdorff distance between two finite (canonical) sets."""
    if A == B:
        return Fraction(0)
    if len(A) == 1 and len(B) == 1:
        return space.distance(A[0], B[0])
    return max(directed_hausdorff(space, A, B), directed_hausdorff(space, B, A))


def brute_force_iterate(system, x, n: int) -> PointSet:
    """``F^n(x)`` by enumerating every word of length ``n`` (exponential; an oracle)."""
    m = len(system.maps)
    return make_set(evaluate_word(system, w, x) for w in itertools.product(range(1, m + 1), repeat=n))


@dataclass
class OrbitRecord:
    """``sets[k-1]`` is ``F^k(x)``."""

    base: Point
    sets: list[PointSet]
    max_steps: int
    max_set_size: int
    size_exceeded: bool = False

    @property
    def steps(self) -> int:
        return len(self.sets)

    def to_dict(self, space: Space) -> dict:
        return {
            "base": format_rational(self.base),
            "steps": self.steps,
            "max_steps": self.max_steps,
            "max_set_size": self.max_set_size,
            "size_exceeded": self.size_exceeded,
            "records": [
                {"step": k, "set": format_set(S), "size": len(S)} for k, S in enumerate(self.sets, start=1)
            ],
        }


def _budgets(max_steps, max_set_size):
    max_steps = default_max_steps() if max_steps is None else max_steps
    max_set_size = DEFAULT_MAX_SET_SIZE if max_set_size is None else max_set_size
    if max_steps < 1 or max_set_size < 1:
        raise InvalidInput("budgets must be >= 1")
    return max_steps, max_set_size


def iterate_sets(system, S: PointSet):
    """Yield ``F(S), F^2(S), ...`` forever."""
    while True:
        S = image_set(system, S)
        yield S


def orbit(system, x, max_steps: int | None = None, max_set_size: int | None = None) -> OrbitRecord:
    """Compute ``F^1(x), ..., F^N(x)``, stopping early if a set outgrows ``max_set_size``.

    The oversize set is still recorded; the record is flagged instead of raising.
    """
    max_steps, max_set_size = _budgets(max_steps, max_set_size)
    x = system.space.point(x)
    rec = OrbitRecord(x, [], max_steps, max_set_size)
    for S in itertools.islice(iterate_sets(system, (x,)), max_steps):
        rec.sets.append(S)
        if len(S) > max_set_size:
            rec.size_exceeded = True
            break
    return rec


@dataclass
class DeletedOrbitSummary:
    """Cycle structure of ``F^1(x), F^2(x), ...``.

    With verdict ``finite``, ``sets`` holds the ``preperiod + cycle`` distinct
    sets in order of first occurrence and ``F^(p+c+1)(x) = F^(p+1)(x)``.
    """

    base: Point
    sets: list[PointSet]
    verdict: str  # "finite" | "unknown"
    preperiod: int | None = None
    cycle: int | None = None
    steps: int = 0
    reason: str | None = None  # why an unknown verdict stopped: "max_steps" or "max_set_size"
    index: dict = field(default_factory=dict, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.verdict == "finite"

    def set_at(self, n: int) -> PointSet:
        """``F^n(x)`` for any ``n >= 1``, using the cycle when finite."""
        if n < 1:
            raise InvalidInput("n must be >= 1")
        if n <= len(self.sets):
            return self.sets[n - 1]
        if not self.is_finite:
            raise InvalidInput(f"step {n} is beyond the computed prefix of {len(self.sets)} sets")
        p, c = self.preperiod, self.cycle
        return self.sets[p + (n - p - 1) % c]

    def to_dict(self, space: Space) -> dict:
        return {
            "base": format_rational(self.base),
            "verdict": self.verdict,
            "distinct_sets": len(self.sets),
            "preperiod": self.preperiod,
            "cycle": self.cycle,
            "steps": self.steps,
            "reason": self.reason,
            "sets": [format_set(S) for S in self.sets],
        }


def deleted_orbit(system, x, max_steps: int | None = None, max_set_size: int | None = None) -> DeletedOrbitSummary:
    """Iterate the hyperspace sequence until a set repeats or a budget runs out."""
    max_steps, max_set_size = _budgets(max_steps, max_set_size)
    x = system.space.point(x)
    seen: dict[PointSet, int] = {}
    sets: list[PointSet] = []
    S: PointSet = (x,)
    for step in range(1, max_steps + 2):
        S = image_set(system, S)
        first = seen.get(S)
        if first is not None:
            return DeletedOrbitSummary(x, sets, "finite", first - 1, step - first, step, index=seen)
        if step > max_steps:
            break
        if len(S) > max_set_size:
            return DeletedOrbitSummary(x, sets, "unknown", steps=step, reason="max_set_size", index=seen)
        seen[S] = step
        sets.append(S)
    return DeletedOrbitSummary(x, sets, "unknown", steps=max_steps, reason="max_steps", index=seen)
