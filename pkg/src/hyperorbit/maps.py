"""Continuous self-maps and their exact evaluation.

Four kinds of map are supported, matching the spaces in :mod:`hyperorbit.space`:

* :class:`PiecewiseLinear` -- continuous interpolant through rational nodes on [0, 1];
* :class:`CircleAffine` -- ``t -> a*t + b (mod 1)`` on the circle (``a = 0`` is a constant map);
* :class:`FiniteTable` -- an image index for every point of a finite space;
* :class:`BuiltinRule` -- the two rule maps on the sequence space ``{1/n} U {0}``.

A word ``(i1, ..., in)`` is evaluated as ``f_i1(f_i2(...f_in(x)))``: the last
index is applied first.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .space import InvalidInput, Point, Space, ZERO, ONE, format_rational, to_rational


@dataclass(frozen=True)
class PiecewiseLinear:
    nodes: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        nodes = tuple((to_rational(x), to_rational(y)) for x, y in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise InvalidInput("piecewise-linear map needs at least two nodes")
        xs = [x for x, _ in nodes]
        if xs[0] != 0 or xs[-1] != 1:
            raise InvalidInput("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise InvalidInput("breakpoints must be strictly increasing")
        for x, y in nodes:
            if not ZERO <= y <= ONE:
                raise InvalidInput(f"node value {format_rational(y)} at {format_rational(x)} leaves [0, 1]")
        object.__setattr__(self, "_xs", tuple(xs))

    @classmethod
    def of(cls, *pairs) -> PiecewiseLinear:
        """``PiecewiseLinear.of((0, 0), ("1/2", 1), (1, 0))``"""
        return cls(tuple(pairs))

    def __call__(self, x: Fraction) -> Fraction:
        xs = self._xs
        k = bisect.bisect_left(xs, x)
        if k < len(xs) and xs[k] == x:
            return self.nodes[k][1]
        (x0, y0), (x1, y1) = self.nodes[k - 1], self.nodes[k]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def slopes(self) -> list[Fraction]:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:])]

    def preimages(self, y: Fraction) -> list[Fraction]:
        """Points whose image is ``y``, excluding interiors of flat segments that equal ``y``."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:]):
            if y0 == y1:
                if y0 == y:
                    out += [x0, x1]
            elif min(y0, y1) <= y <= max(y0, y1):
                out.append(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        return sorted(set(out))


@dataclass(frozen=True)
class CircleAffine:
    a: int
    b: Fraction = ZERO

    def __post_init__(self):
        if isinstance(self.a, bool) or not isinstance(self.a, int):
            raise InvalidInput(f"circle map degree must be an integer, got {self.a!r}")
        object.__setattr__(self, "b", to_rational(self.b) % 1)

    def __call__(self, t: Fraction) -> Fraction:
        return (self.a * t + self.b) % 1


@dataclass(frozen=True)
class FiniteTable:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if not images:
            raise InvalidInput("table map needs at least one entry")
        for i in images:
            if isinstance(i, bool) or not isinstance(i, int):
                raise InvalidInput(f"table entries must be integer indices, got {i!r}")
        object.__setattr__(self, "images", images)

    def __call__(self, i: int) -> int:
        return self.images[i]


def _seq_f1(n: int) -> int:
    # 1 -> 1/2 -> 1/3 -> 1, then 1/n -> 1/(n+1)
    return {1: 2, 2: 3, 3: 1}.get(n, n + 1)


def _seq_f2(n: int) -> int:
    # 1 -> 1/4 -> 1/5 -> 1, 1/3 -> 1/6, otherwise 1/n -> 1/(n+1)
    return {1: 4, 4: 5, 5: 1, 3: 6}.get(n, n + 1)


_RULES = {"seq_f1": _seq_f1, "seq_f2": _seq_f2}


@dataclass(frozen=True)
class BuiltinRule:
    """A named rule map on the sequence space; both rules fix 0 by continuity."""

    name: str

    def __post_init__(self):
        if self.name not in _RULES:
            raise InvalidInput(f"unknown builtin rule {self.name!r}; available: {sorted(_RULES)}")

    def __call__(self, x: Fraction) -> Fraction:
        if x == 0:
            return ZERO
        return Fraction(1, _RULES[self.name](x.denominator))


MapSpec = Union[PiecewiseLinear, CircleAffine, FiniteTable, BuiltinRule]

_CARRIER = {PiecewiseLinear: "interval", CircleAffine: "circle", FiniteTable: "finite", BuiltinRule: "seq"}


def check_map(f: MapSpec, space: Space) -> None:
    """Raise InvalidInput unless ``f`` is a self-map of ``space``."""
    kind = _CARRIER.get(type(f))
    if kind is None:
        raise InvalidInput(f"not a map spec: {f!r}")
    if kind != space.kind:
        raise InvalidInput(f"{type(f).__name__} maps act on {kind} spaces, not {space}")
    if isinstance(f, FiniteTable):
        if len(f.images) != space.size:
            raise InvalidInput(f"table has {len(f.images)} entries but the space has {space.size} points")
        for i in f.images:
            if not 0 <= i < space.size:
                raise InvalidInput(f"table image {i} outside finite({space.size})")


def evaluate(f: MapSpec, space: Space, x) -> Point:
    check_map(f, space)
    return space.point(f(space.point(x)))


def lipschitz_constant(f: MapSpec, space: Space) -> Fraction | None:
    """Exact Lipschitz constant for the space's metric, or None when not available."""
    if isinstance(f, PiecewiseLinear):
        return max(abs(s) for s in f.slopes())
    if isinstance(f, CircleAffine):
        return Fraction(abs(f.a))
    if isinstance(f, FiniteTable):
        return ONE if len(set(f.images)) > 1 else ZERO
    return None


# words -----------------------------------------------------------------

Word = tuple[int, ...]


def check_word(system, word: Sequence[int]) -> Word:
    word = tuple(word)
    if not word:
        raise InvalidInput("a word needs at least one map index")
    n = len(system.maps)
    for i in word:
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= n:
            raise InvalidInput(f"map index {i!r} outside 1..{n}")
    return word


def evaluate_word(system, word: Sequence[int], x) -> Point:
    """Apply ``f_{i1} f_{i2} ... f_{in}`` to ``x``; ``in`` acts first. Indices are 1-based."""
    word = check_word(system, word)
    space = system.space
    y = space.point(x)
    for i in reversed(word):
        y = system.maps[i - 1](y)
    return y


# commutation -----------------------------------------------------------

@dataclass(frozen=True)
class Commutation:
    verdict: str  # "yes" | "no" | "unknown"
    witness: Point | None = None
    method: str = "exhaustive"

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def _composition_breakpoints(f: PiecewiseLinear, g: PiecewiseLinear) -> set[Fraction]:
    # f∘g is linear between g's breakpoints and g-preimages of f's breakpoints
    pts = set(g._xs)
    for b in f._xs:
        pts.update(g.preimages(b))
    return pts


def commutes(system, i: int, j: int, mode: str = "auto", samples: int = 257) -> Commutation:
    """Decide whether ``f_i f_j = f_j f_i``.

    Finite tables are checked exhaustively, circle-affine pairs symbolically and
    piecewise-linear pairs on the union of the breakpoints of both compositions
    (two piecewise-linear functions agreeing there agree everywhere). Anything
    else, or ``mode="sampled"``, falls back to an evenly spaced net of
    ``samples`` points, where passing only yields ``unknown``.
    """
    check_word(system, (i, j))
    f, g = system.maps[i - 1], system.maps[j - 1]
    space = system.space

    def differs(x):
        return f(g(x)) != g(f(x))

    if mode == "auto":
        if space.is_finite:
            for x in space.points():
                if differs(x):
                    return Commutation("no", x)
            return Commutation("yes")
        if isinstance(f, CircleAffine) and isinstance(g, CircleAffine):
            # linear coefficients agree (a_i a_j); compare constant terms mod 1
            if (f.a * g.b + f.b - g.a * f.b - g.b) % 1 == 0:
                return Commutation("yes", method="symbolic")
            return Commutation("no", ZERO, method="symbolic")
        if isinstance(f, PiecewiseLinear) and isinstance(g, PiecewiseLinear):
            pts = _composition_breakpoints(f, g) | _composition_breakpoints(g, f)
            for x in sorted(pts):
                if differs(x):
                    return Commutation("no", x, method="breakpoints")
            return Commutation("yes", method="breakpoints")
    elif mode != "sampled":
        raise InvalidInput(f"unknown commutation mode {mode!r}")

    for x in net_points(space, samples):
        if differs(x):
            return Commutation("no", x, method="sampled")
    return Commutation("unknown", method="sampled")


def net_points(space: Space, count: int) -> list[Point]:
    """``count`` evenly spaced points (all points for finite spaces)."""
    if space.is_finite:
        return space.points()
    if space.kind == "seq":
        return [ZERO] + [Fraction(1, n) for n in range(1, count)]
    if space.kind == "circle":
        return [Fraction(k, count) for k in range(count)]
    m = max(count - 1, 1)
    return [Fraction(k, m) for k in range(m + 1)]

