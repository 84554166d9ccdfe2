"""Multi-map systems: the builtin example registry, seeded generators and the system file format."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .maps import BuiltinRule, CircleAffine, FiniteTable, MapSpec, PiecewiseLinear, check_map
from .space import InvalidInput, Space, format_rational, parse_rational

FORMAT_VERSION = "hyperorbit/1"


@dataclass(frozen=True)
class MultiMapSystem:
    """A space together with an ordered tuple of self-maps; map indices are 1-based."""

    space: Space
    maps: tuple[MapSpec, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise InvalidInput("a system needs at least one map")
        for k, f in enumerate(maps, start=1):
            try:
                check_map(f, self.space)
            except InvalidInput as exc:
                raise InvalidInput(f"map {k}: {exc}") from None
        object.__setattr__(self, "maps", maps)

    def __len__(self) -> int:
        return len(self.maps)

    def single(self, i: int) -> MultiMapSystem:
        """The one-map system ``{f_i}``."""
        return MultiMapSystem(self.space, (self.maps[i - 1],), name=f"{self.name or 'system'}[f{i}]")

    def to_dict(self) -> dict:
        out = {"version": FORMAT_VERSION, "space": self.space.to_dict(), "maps": [map_to_dict(f) for f in self.maps]}
        if self.name:
            out["metadata"] = {"name": self.name}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


# --- map wire form ---------------------------------------------------------

def map_to_dict(f: MapSpec) -> dict:
    if isinstance(f, PiecewiseLinear):
        return {"type": "pwl", "nodes": [[format_rational(x), format_rational(y)] for x, y in f.nodes]}
    if isinstance(f, CircleAffine):
        return {"type": "circle_affine", "a": f.a, "b": format_rational(f.b)}
    if isinstance(f, FiniteTable):
        return {"type": "table", "images": list(f.images)}
    if isinstance(f, BuiltinRule):
        return {"type": "builtin", "name": f.name}
    raise InvalidInput(f"not a map spec: {f!r}")


def _rational_field(value, where: str) -> Fraction:
    if not isinstance(value, str):
        raise InvalidInput(f"{where}: rationals are written as strings like \"1/2\", got {value!r}")
    try:
        return parse_rational(value)
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None


def map_from_dict(data, where: str = "map") -> MapSpec:
    if not isinstance(data, dict):
        raise InvalidInput(f"{where}: expected an object")
    kind = data.get("type")
    try:
        if kind == "pwl":
            nodes = data.get("nodes")
            if not isinstance(nodes, list):
                raise InvalidInput("'nodes' must be a list of [x, y] pairs")
            parsed = []
            for k, node in enumerate(nodes):
                if not isinstance(node, list) or len(node) != 2:
                    raise InvalidInput(f"nodes[{k}] must be a pair")
                parsed.append((_rational_field(node[0], f"nodes[{k}][0]"), _rational_field(node[1], f"nodes[{k}][1]")))
            return PiecewiseLinear(tuple(parsed))
        if kind == "circle_affine":
            return CircleAffine(data.get("a"), _rational_field(data.get("b", "0"), "b"))
        if kind == "table":
            images = data.get("images")
            if not isinstance(images, list):
                raise InvalidInput("'images' must be a list of indices")
            return FiniteTable(tuple(images))
        if kind == "builtin":
            return BuiltinRule(data.get("name"))
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None
    raise InvalidInput(f"{where}: unknown map type {kind!r} (expected pwl, circle_affine, table or builtin)")


def system_from_dict(data) -> MultiMapSystem:
    if not isinstance(data, dict):
        raise InvalidInput("system file must contain a JSON object")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise InvalidInput(f"version: expected {FORMAT_VERSION!r}, got {version!r}")
    try:
        space = Space.from_dict(data.get("space"))
    except InvalidInput as exc:
        raise InvalidInput(f"space: {exc}") from None
    maps = data.get("maps")
    if not isinstance(maps, list) or not maps:
        raise InvalidInput("maps: expected a nonempty list")
    specs = tuple(map_from_dict(m, f"maps[{k}]") for k, m in enumerate(maps))
    for k, f in enumerate(specs):
        try:
            check_map(f, space)
        except InvalidInput as exc:
            raise InvalidInput(f"maps[{k}]: {exc}") from None
    name = (data.get("metadata") or {}).get("name")
    return MultiMapSystem(space, specs, name=name)


def system_from_json(text: str) -> MultiMapSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return system_from_dict(data)


def load_system(ref: str) -> MultiMapSystem:
    """Resolve ``builtin:<name>`` or a path to a system file."""
    if ref.startswith("builtin:"):
        return builtin(ref[len("builtin:"):])
    path = Path(ref)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read system file {ref}: {exc.strerror}") from None
    try:
        return system_from_json(text)
    except InvalidInput as exc:
        raise InvalidInput(f"{ref}: {exc}") from None


# --- builtins --------------------------------------------------------------

def _pwl(*pairs) -> PiecewiseLinear:
    return PiecewiseLinear(tuple((Fraction(x), Fraction(y)) for x, y in pairs))


H = Fraction(1, 2)

TENT = _pwl((0, 0), (H, 1), (1, 0))
FLIPPED_TENT = _pwl((0, 1), (H, 0), (1, 1))
IDENTITY = _pwl((0, 0), (1, 1))


def _tent_pair():
    return MultiMapSystem(Space.interval(), (TENT, FLIPPED_TENT), "tent-pair")


def _binary_endpoints():
    return MultiMapSystem(Space.finite(2), (FiniteTable((0, 0)), FiniteTable((1, 1))), "binary-endpoints")


def _truncated_tent_pair():
    f1 = _pwl((0, 0), (H, 1), (1, 1))
    f2 = _pwl((0, 1), (H, 1), (1, 0))
    return MultiMapSystem(Space.interval(), (f1, f2), "truncated-tent-pair")


def _seq_space():
    return MultiMapSystem(Space.seq(), (BuiltinRule("seq_f1"), BuiltinRule("seq_f2")), "seq-space")


def _rot3_pair():
    return MultiMapSystem(Space.finite(3), (FiniteTable((1, 2, 0)), FiniteTable((2, 0, 1))), "rot3-pair")


def _circle_23():
    return MultiMapSystem(Space.circle(), (CircleAffine(2), CircleAffine(3)), "circle-23")


def _collapse_doubling():
    return MultiMapSystem(Space.circle(), (CircleAffine(0, 0), CircleAffine(2, 0)), "collapse-doubling")


def _identity_pair():
    return MultiMapSystem(Space.interval(), (IDENTITY, IDENTITY), "identity-pair")


_BUILTINS = {
    "tent-pair": (_tent_pair, "tent map and its flip on [0,1]; F^n(x) = {f1^n(x), 1 - f1^n(x)}"),
    "binary-endpoints": (_binary_endpoints, "constant maps 0 and 1 on the two-point space; transitive, Ran = {{0,1}}"),
    "truncated-tent-pair": (_truncated_tent_pair, "tent capped at 1 and its mirror on [0,1]; 2/7 has period 4"),
    "seq-space": (_seq_space, "two rule maps on {1/n} U {0}; 1 has period 3 for each map but not for F"),
    "rot3-pair": (_rot3_pair, "the two 3-cycles on {0,1,2}; each transitive, F not transitive"),
    "circle-23": (_circle_23, "t -> 2t and t -> 3t on the circle; expanding, hence sensitive"),
    "collapse-doubling": (_collapse_doubling, "constant 0 and doubling on the circle; Devaney chaotic"),
    "identity-pair": (_identity_pair, "two identity maps on [0,1]; every point fixed, not sensitive"),
}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def describe_builtins() -> list[tuple[str, str]]:
    return [(name, desc) for name, (_, desc) in _BUILTINS.items()]


def builtin(name: str) -> MultiMapSystem:
    try:
        factory, _ = _BUILTINS[name]
    except KeyError:
        raise InvalidInput(f"unknown builtin system {name!r}; available: {', '.join(_BUILTINS)}") from None
    return factory()


# --- generators ------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`generate`.

    kind:
      ``finite_random``       -- ``maps`` uniformly random tables on ``finite(size)``;
      ``commuting_rotations`` -- two rational rotations of the circle (``b1``, ``b2``
                                 or random with denominators <= ``max_denominator``);
      ``constant_plus_map``   -- ``f1 = c`` constant and an ``f2`` fixing ``c``; on the
                                 circle ``f2(t) = a t + b`` with ``b = c - a c``, on
                                 ``carrier="finite"`` a random table with ``f2(c) = c``.
    """

    kind: str
    seed: int = 0
    size: int = 4
    maps: int = 2
    max_denominator: int = 12
    carrier: str = "circle"
    c: Fraction | int | str | None = None
    a: int | None = None
    b1: Fraction | str | None = None
    b2: Fraction | str | None = None


def _random_rational(rng: random.Random, max_denominator: int) -> Fraction:
    q = rng.randint(1, max_denominator)
    return Fraction(rng.randrange(q), q)


def generate(spec: GeneratorSpec) -> MultiMapSystem:
    rng = random.Random(spec.seed)
    if spec.kind == "finite_random":
        if spec.size < 1 or spec.maps < 1:
            raise InvalidInput("finite_random needs size >= 1 and maps >= 1")
        tables = tuple(FiniteTable(tuple(rng.randrange(spec.size) for _ in range(spec.size))) for _ in range(spec.maps))
        return MultiMapSystem(Space.finite(spec.size), tables, f"finite_random(seed={spec.seed})")

    if spec.kind == "commuting_rotations":
        if spec.max_denominator < 1:
            raise InvalidInput("max_denominator must be >= 1")
        b1 = parse_rational(str(spec.b1)) if spec.b1 is not None else _random_rational(rng, spec.max_denominator)
        b2 = parse_rational(str(spec.b2)) if spec.b2 is not None else _random_rational(rng, spec.max_denominator)
        return MultiMapSystem(Space.circle(), (CircleAffine(1, b1), CircleAffine(1, b2)),
                              f"rotations({format_rational(b1)},{format_rational(b2)})")

    if spec.kind == "constant_plus_map":
        if spec.carrier == "circle":
            c = parse_rational(str(spec.c)) % 1 if spec.c is not None else _random_rational(rng, spec.max_denominator)
            a = spec.a if spec.a is not None else rng.choice([-3, -2, -1, 1, 2, 3])
            f1, f2 = CircleAffine(0, c), CircleAffine(a, c - a * c)
            system = MultiMapSystem(Space.circle(), (f1, f2), f"constant_plus_map(c={format_rational(c)},a={a})")
        elif spec.carrier == "finite":
            if spec.size < 1:
                raise InvalidInput("constant_plus_map needs size >= 1")
            c = int(spec.c) if spec.c is not None else rng.randrange(spec.size)
            if not 0 <= c < spec.size:
                raise InvalidInput(f"c={c} outside finite({spec.size})")
            images = [rng.randrange(spec.size) for _ in range(spec.size)]
            images[c] = c
            f1, f2 = FiniteTable((c,) * spec.size), FiniteTable(tuple(images))
            system = MultiMapSystem(Space.finite(spec.size), (f1, f2), f"constant_plus_map(finite,c={c})")
        else:
            raise InvalidInput(f"unknown carrier {spec.carrier!r} (circle or finite)")
        # guarantees: f1 is the constant c and f2 fixes c
        assert all(f1(x) == c for x in _probe_points(system.space))
        assert f2(c) == c
        return system

    raise InvalidInput(f"unknown generator kind {spec.kind!r}")


def _probe_points(space: Space) -> Sequence:
    if space.is_finite:
        return space.points()
    return [Fraction(k, 16) for k in range(16)]

