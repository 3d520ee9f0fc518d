"""Space expressions: smooth projective varieties built from atoms.

A space is an immutable tree.  Leaves are :class:`Atom` (a named variety
whose properties are asserted by the user), :class:`Point` and
:class:`Empty`; inner nodes are :class:`Product`, :class:`ProjBundle` and
:class:`Blowup`.  Nothing here knows any equations: dimension and property
flags are the only geometry carried around.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

from .polynomial import PoincarePolynomial


class Tristate(enum.Enum):
    """Three-valued truth with Kleene connectives (FALSE < UNKNOWN < TRUE)."""

    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    def __and__(self, other: Tristate) -> Tristate:
        return Tristate(min(self.value, other.value))

    def __or__(self, other: Tristate) -> Tristate:
        return Tristate(max(self.value, other.value))

    def __invert__(self) -> Tristate:
        return Tristate(2 - self.value)

    def __bool__(self):
        raise TypeError("Tristate has no boolean value; compare against Tristate.TRUE")

    @classmethod
    def coerce(cls, value) -> Tristate:
        if isinstance(value, Tristate):
            return value
        if value is None:
            return cls.UNKNOWN
        if isinstance(value, bool):
            return cls.TRUE if value else cls.FALSE
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("true", "t", "yes", "1"):
                return cls.TRUE
            if key in ("false", "f", "no", "0"):
                return cls.FALSE
            if key in ("unknown", "u", "?", "none"):
                return cls.UNKNOWN
        raise ValueError(f"cannot interpret {value!r} as a truth value")

    @staticmethod
    def all(values: Iterable[Tristate]) -> Tristate:
        out = Tristate.TRUE
        for v in values:
            out = out & v
        return out

    @staticmethod
    def any(values: Iterable[Tristate]) -> Tristate:
        out = Tristate.FALSE
        for v in values:
            out = out | v
        return out

    def __str__(self) -> str:
        return self.name.lower()


TRUE, FALSE, UNKNOWN = Tristate.TRUE, Tristate.FALSE, Tristate.UNKNOWN


@dataclass(frozen=True)
class PropertyFacts:
    """Asserted truth of ``ordinary`` and ``hodge_witt`` for an atom.

    ``hw_from_ordinary`` records that the Hodge-Witt flag was filled in by
    normalization rather than asserted, so certificates can show the
    implication step instead of pretending it was a user fact.
    """

    ordinary: Tristate = UNKNOWN
    hodge_witt: Tristate = UNKNOWN
    hw_from_ordinary: bool = False

    def normalized(self) -> PropertyFacts:
        if self.ordinary is TRUE and self.hodge_witt is not TRUE:
            return PropertyFacts(TRUE, TRUE, hw_from_ordinary=True)
        return self


def facts(ordinary=UNKNOWN, hodge_witt=UNKNOWN) -> PropertyFacts:
    return PropertyFacts(Tristate.coerce(ordinary), Tristate.coerce(hodge_witt)).normalized()


class SpaceError(ValueError):
    pass


def _cache_hash(obj, *parts):
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, eq=True)
class Empty:
    def __post_init__(self):
        _cache_hash(self)

    def __hash__(self):
        return self._hash

    dim = -1


@dataclass(frozen=True, eq=True)
class Point:
    def __post_init__(self):
        _cache_hash(self)

    def __hash__(self):
        return self._hash

    dim = 0


@dataclass(frozen=True, eq=True)
class Atom:
    name: str
    dim: int
    facts: PropertyFacts = field(default_factory=PropertyFacts)
    poincare: tuple[int, ...] | None = None

    def __post_init__(self):
        _cache_hash(self, self.name, self.dim, self.facts, self.poincare)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Product:
    left: SpaceExpr
    right: SpaceExpr
    dim: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", self.left.dim + self.right.dim)
        _cache_hash(self, self.left, self.right)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class ProjBundle:
    """Projectivization of a rank ``fiber_rank`` bundle: fibers are P^(r-1)."""

    base: SpaceExpr
    fiber_rank: int
    dim: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", self.base.dim + self.fiber_rank - 1)
        _cache_hash(self, self.base, self.fiber_rank)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Blowup:
    ambient: SpaceExpr
    center: SpaceExpr
    codim: int
    dim: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", self.ambient.dim)
        _cache_hash(self, self.ambient, self.center, self.codim)

    def __hash__(self):
        return self._hash

    @property
    def divisorial(self) -> bool:
        """Blowing up a divisor changes nothing; kept for uniform bookkeeping."""
        return self.codim == 1


SpaceExpr = Union[Empty, Point, Atom, Product, ProjBundle, Blowup]

EMPTY = Empty()
POINT = Point()


def atom(name: str, dim: int, ordinary=UNKNOWN, hodge_witt=UNKNOWN, poincare=None) -> Atom:
    """An uninterpreted smooth projective variety with asserted facts.

    ``ordinary=True`` forces ``hodge_witt=True``.
    """
    if not name:
        raise SpaceError("atom needs a nonempty name")
    if dim < 0:
        raise SpaceError(f"atom {name!r}: negative dimension {dim}")
    poly = None
    if poincare is not None:
        p = PoincarePolynomial(poincare)
        if p.degree > 2 * dim:
            raise SpaceError(f"atom {name!r}: Poincare polynomial of degree {p.degree} exceeds 2*dim = {2 * dim}")
        if p[0] != 1:
            raise SpaceError(f"atom {name!r}: Poincare polynomial must have constant term 1")
        if any(c < 0 for c in p):
            raise SpaceError(f"atom {name!r}: negative Betti number")
        poly = p.coeffs
    return Atom(name, dim, facts(ordinary, hodge_witt), poly)


def projective_space(d: int) -> Atom:
    if d < 0:
        raise SpaceError("projective space of negative dimension")
    return atom(f"P{d}", d, TRUE, TRUE, PoincarePolynomial.projective_space(d))


def _require_nonempty(s, what):
    if isinstance(s, Empty):
        raise SpaceError(f"{what}: empty operand")


def product(a: SpaceExpr, b: SpaceExpr) -> Product:
    _require_nonempty(a, "product")
    _require_nonempty(b, "product")
    return Product(a, b)


def power(x: SpaceExpr, k: int) -> SpaceExpr:
    """Left-nested self-product ``((x * x) * x) ...``; ``k = 0`` gives a point."""
    if k < 0:
        raise SpaceError("negative power")
    if k == 0:
        return POINT
    out = x
    for _ in range(k - 1):
        out = product(out, x)
    return out


def proj_bundle(base: SpaceExpr, fiber_rank: int) -> ProjBundle:
    _require_nonempty(base, "proj_bundle")
    if fiber_rank < 1:
        raise SpaceError(f"proj_bundle: fiber rank must be >= 1, got {fiber_rank}")
    return ProjBundle(base, fiber_rank)


def blow_up(ambient: SpaceExpr, center: SpaceExpr, codim: int | None = None) -> SpaceExpr:
    """``Bl_center(ambient)``.  An empty center gives back ``ambient``."""
    _require_nonempty(ambient, "blow_up")
    if isinstance(center, Empty):
        return ambient
    if codim is None:
        codim = ambient.dim - center.dim
    if codim < 1:
        raise SpaceError(f"blow_up: codimension must be >= 1, got {codim}")
    if center.dim + codim != ambient.dim:
        raise SpaceError(
            f"blow_up: dim(center) + codim = {center.dim} + {codim} != dim(ambient) = {ambient.dim}"
        )
    return Blowup(ambient, center, codim)


def dimension(s: SpaceExpr) -> int:
    if isinstance(s, Empty):
        raise SpaceError("the empty scheme has no dimension")
    return s.dim


def atoms(s: SpaceExpr) -> dict[str, Atom]:
    """All atoms occurring in ``s``, by name."""
    out: dict[str, Atom] = {}
    stack = [s]
    seen = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Atom):
            prev = out.setdefault(node.name, node)
            if prev != node:
                raise SpaceError(f"two different atoms share the name {node.name!r}")
        elif isinstance(node, Product):
            stack += [node.left, node.right]
        elif isinstance(node, ProjBundle):
            stack.append(node.base)
        elif isinstance(node, Blowup):
            stack += [node.ambient, node.center]
    return out


def substitute(s: SpaceExpr, replacements: dict[str, SpaceExpr]) -> SpaceExpr:
    """Replace atoms by name, rebuilding only the touched parts of the tree."""
    memo: dict[int, SpaceExpr] = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Atom):
            out = replacements.get(node.name, node)
        elif isinstance(node, Product):
            left, right = go(node.left), go(node.right)
            out = node if (left is node.left and right is node.right) else Product(left, right)
        elif isinstance(node, ProjBundle):
            base = go(node.base)
            out = node if base is node.base else ProjBundle(base, node.fiber_rank)
        elif isinstance(node, Blowup):
            amb, cen = go(node.ambient), go(node.center)
            out = node if (amb is node.ambient and cen is node.center) else Blowup(amb, cen, node.codim)
        else:
            out = node
        memo[key] = out
        return out

    return go(s)


def with_facts(a: Atom, ordinary=None, hodge_witt=None) -> Atom:
    """Override asserted facts, then normalize (so ordinary=True also sets Hodge-Witt)."""
    o = a.facts.ordinary if ordinary is None else Tristate.coerce(ordinary)
    h = a.facts.hodge_witt if hodge_witt is None else Tristate.coerce(hodge_witt)
    if ordinary is not None and hodge_witt is None and a.facts.hw_from_ordinary:
        h = UNKNOWN
    return replace(a, facts=PropertyFacts(o, h).normalized())


def render(s: SpaceExpr) -> str:
    """Canonical one-line text form, e.g. ``Bl((P2 x P2), P2, 2)``."""
    if isinstance(s, Empty):
        return "∅"
    if isinstance(s, Point):
        return "pt"
    if isinstance(s, Atom):
        return s.name
    if isinstance(s, Product):
        return f"({render(s.left)} x {render(s.right)})"
    if isinstance(s, ProjBundle):
        return f"P({render(s.base)}, {s.fiber_rank})"
    if isinstance(s, Blowup):
        return f"Bl({render(s.ambient)}, {render(s.center)}, {s.codim})"
    raise TypeError(f"not a space expression: {s!r}")
