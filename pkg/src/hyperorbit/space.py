"""Exact rational scalars and the compact metric spaces supported by the library.

Points are plain Python values: :class:`fractions.Fraction` for the interval,
the circle (measured in turns, so ``1/4`` is a quarter turn) and the sequence
space ``{1/n} U {0}``; ``int`` indices for finite discrete spaces.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
Point = Union[Fraction, int]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class HyperorbitError(Exception):
    """Base class for library errors."""


class InvalidInput(HyperorbitError, ValueError):
    """A value does not belong where it was used (bad point, map, file...)."""


class UnsupportedOperation(HyperorbitError):
    """The operation is not decidable or not defined for this kind of space."""


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidInput(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"malformed rational {text!r} (expected 'p/q' or 'p')") from None
    return value


def format_rational(value) -> str:
    """Wire form: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = to_rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Space:
    """One of the supported compact metric spaces.

    ``kind`` is ``"interval"`` ([0, 1]), ``"circle"`` ([0, 1) in turns, arc
    metric), ``"finite"`` (``size`` points with the discrete metric) or
    ``"seq"`` ({1/n : n >= 1} U {0} with the metric of the real line).
    """

    kind: str
    size: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidInput(f"unknown space kind {self.kind!r}; expected one of {sorted(_KINDS)}")
        if self.kind == "finite":
            if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
                raise InvalidInput(f"finite space needs a point count k >= 1, got {self.size!r}")
        elif self.size is not None:
            raise InvalidInput(f"{self.kind} space takes no size")

    # constructors -----------------------------------------------------
    @classmethod
    def interval(cls) -> Space:
        return cls("interval")

    @classmethod
    def circle(cls) -> Space:
        return cls("circle")

    @classmethod
    def finite(cls, k: int) -> Space:
        return cls("finite", k)

    @classmethod
    def seq(cls) -> Space:
        return cls("seq")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self) -> str:
        return f"finite({self.size})" if self.is_finite else self.kind

    # points -----------------------------------------------------------
    def point(self, value) -> Point:
        """Validate ``value`` as a point of this space and return its canonical form.

        Raises InvalidInput when the value lies outside the space.
        """
        if self.kind == "finite":
            if isinstance(value, str):
                value = parse_rational(value)
            if isinstance(value, bool) or not isinstance(value, _RationalABC) or value.denominator != 1:
                raise InvalidInput(f"finite space points are integer indices, got {value!r}")
            i = int(value)
            if not 0 <= i < self.size:
                raise InvalidInput(f"index {i} outside finite({self.size})")
            return i
        q = to_rational(value)
        if self.kind == "interval":
            if not ZERO <= q <= ONE:
                raise InvalidInput(f"{format_rational(q)} is not in [0, 1]")
        elif self.kind == "circle":
            if not ZERO <= q < ONE:
                raise InvalidInput(f"{format_rational(q)} is not in [0, 1) (circle points are turn fractions)")
        else:
            if q != 0 and q.numerator != 1:
                raise InvalidInput(f"{format_rational(q)} is not of the form 1/n or 0")
        return q

    def contains(self, value) -> bool:
        try:
            self.point(value)
        except InvalidInput:
            return False
        return True

    def parse_point(self, text: str) -> Point:
        return self.point(parse_rational(text))

    def format_point(self, p: Point) -> str:
        return format_rational(p)

    # metric -----------------------------------------------------------
    def distance(self, p: Point, q: Point) -> Fraction:
        if self.kind == "finite":
            return ZERO if p == q else ONE
        t = abs(p - q)
        if self.kind == "circle":
            return min(t, 1 - t)
        return Fraction(t)

    def diameter(self) -> Fraction:
        if self.kind == "circle":
            return HALF
        if self.kind == "finite":
            return ONE if self.size >= 2 else ZERO
        return ONE

    def points(self) -> list[Point]:
        """All points of a finite space."""
        if not self.is_finite:
            raise UnsupportedOperation(f"{self} has infinitely many points")
        return list(range(self.size))

    # wire form --------------------------------------------------------
    def to_dict(self) -> dict:
        if self.is_finite:
            return {"type": "finite", "size": self.size}
        return {"type": self.kind}

    @classmethod
    def from_dict(cls, data: dict) -> Space:
        if not isinstance(data, dict) or "type" not in data:
            raise InvalidInput("space must be an object with a 'type' field")
        kind = data["type"]
        if kind == "finite":
            return cls.finite(data.get("size"))
        return cls(kind)


_KINDS = {"interval", "circle", "finite", "seq"}


def distance(space: Space, p: Point, q: Point) -> Fraction:
    """Exact metric value between two points of ``space``."""
    return space.distance(space.point(p), space.point(q))


def diameter(space: Space) -> Fraction:
    return space.diameter()
