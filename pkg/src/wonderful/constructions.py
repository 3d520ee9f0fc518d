"""Named instances: configuration spaces and moduli spaces as towers.

Two kinds of output:

* ``(ambient, BuildingSet)`` pairs for Fulton-MacPherson ``X[n]``, Ulyanov's
  ``X<n>`` and Kapranov's presentation of ``M_{0,n}``; these go through
  :func:`wonderful.blowup.wonderful`.
* :class:`TowerDescription` for Keel's presentation of ``M_{0,n+1}`` over
  ``M_{0,n} x P^1`` and for the spaces ``T_{d,n}`` of pointed rooted trees of
  projective spaces, which are given directly as a bundle followed by
  blowups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .lattice import BuildingSet, ElementDescriptor, close_under_meet
from .space import POINT, SpaceExpr, blow_up, power, product, proj_bundle, projective_space


class UnsupportedRange(ValueError):
    """A generator parameter outside the range the construction is known for."""


# -- set partitions ----------------------------------------------------------

Partition = tuple[tuple[int, ...], ...]


def canonical(blocks) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def partition_join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening (the polydiagonal of the intersection)."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in p + q:
        for x in block:
            find(x)
        for x in block[1:]:
            parent[find(x)] = find(block[0])
    groups: dict[int, list[int]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return canonical(groups.values())


def polydiagonal_id(p: Partition, n: int) -> str:
    sep = "" if n < 10 else "."
    return "D" + "|".join(sep.join(map(str, b)) for b in p if len(b) > 1)


def polydiagonal_origin(p: Partition) -> str:
    return "|".join("Δ{" + ",".join(map(str, b)) + "}" for b in p if len(b) > 1)


def _diagonal(x: SpaceExpr, n: int, p: Partition) -> ElementDescriptor:
    k = len(p)
    space = power(x, k)
    return ElementDescriptor(polydiagonal_id(p, n), space.dim, space, polydiagonal_origin(p))


def _single_block(n: int, s: Sequence[int]) -> Partition:
    rest = [(i,) for i in range(1, n + 1) if i not in s]
    return canonical([tuple(s)] + rest)


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` (canonical form)."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield canonical(((first,),) + p)
        for i in range(len(p)):
            yield canonical(p[:i] + ((first,) + p[i],) + p[i + 1 :])


def _polydiagonal_oracle(x: SpaceExpr, n: int, partitions: Mapping[str, Partition]):
    def meet(a: ElementDescriptor, b: ElementDescriptor):
        j = partition_join(partitions[a.id], partitions[b.id])
        d = _diagonal(x, n, j)
        partitions.setdefault(d.id, j)
        return d

    return meet


def _check_base(x: SpaceExpr, n: int):
    if n < 2:
        raise UnsupportedRange(f"need n >= 2 points, got {n}")
    if x.dim < 1:
        raise UnsupportedRange("base must have positive dimension")


def fm_building_set(x: SpaceExpr, n: int) -> tuple[SpaceExpr, BuildingSet]:
    """Fulton-MacPherson ``X[n]``: all diagonals ``Δ_S``, ``|S| >= 2``, in ``X^n``."""
    _check_base(x, n)
    ambient = power(x, n)
    parts: dict[str, Partition] = {}
    gens = []
    for size in range(2, n + 1):
        for s in combinations(range(1, n + 1), size):
            p = _single_block(n, s)
            d = _diagonal(x, n, p)
            parts[d.id] = p
            gens.append(d)
    arr = close_under_meet(ambient, gens, _polydiagonal_oracle(x, n, parts))
    return ambient, BuildingSet(arr, frozenset(g.id for g in gens))


def ulyanov_building_set(x: SpaceExpr, n: int) -> tuple[SpaceExpr, BuildingSet]:
    """Ulyanov's ``X<n>``: every polydiagonal is blown up."""
    _check_base(x, n)
    ambient = power(x, n)
    parts: dict[str, Partition] = {}
    gens = []
    for p in set_partitions(range(1, n + 1)):
        if all(len(b) == 1 for b in p):
            continue
        d = _diagonal(x, n, p)
        parts[d.id] = p
        gens.append(d)
    arr = close_under_meet(ambient, gens, _polydiagonal_oracle(x, n, parts))
    return ambient, BuildingSet(arr, frozenset(arr.elements))


def polydiagonal_building_set(x: SpaceExpr, n: int, partitions, members=None) -> tuple[SpaceExpr, BuildingSet]:
    """Arrangement generated by arbitrary polydiagonals of ``X^n``.

    ``partitions`` lists set partitions of ``1..n`` (singleton blocks may be
    left out); ``members`` defaults to the generators themselves.  The result
    is not checked to be a building set.
    """
    if n < 2:
        raise UnsupportedRange(f"need n >= 2 points, got {n}")
    ambient = power(x, n)
    parts: dict[str, Partition] = {}
    gens = []
    for blocks in partitions:
        covered = {i for b in blocks for i in b}
        if not covered <= set(range(1, n + 1)):
            raise ValueError(f"partition {blocks} is not on 1..{n}")
        p = canonical(list(blocks) + [(i,) for i in range(1, n + 1) if i not in covered])
        d = _diagonal(x, n, p)
        parts[d.id] = p
        gens.append(d)
    arr = close_under_meet(ambient, gens, _polydiagonal_oracle(x, n, parts))
    ids = frozenset(g.id for g in gens) if members is None else frozenset(members)
    return ambient, BuildingSet(arr, ids)


def affine_polydiagonal_building_set(d: int, n: int) -> tuple[SpaceExpr, BuildingSet]:
    """Diagonals of ``n`` points of ``A^d`` modulo translation and scaling.

    The ambient is ``P^(d(n-1)-1)``; the polydiagonal of a partition with
    ``k`` blocks is a ``P^(d(k-1)-1)``, and the one-block partition is empty.
    Blowing up the diagonals ``Δ_S`` with ``2 <= |S| <= n-1`` gives ``T_{d,n}``.
    """
    if d < 1 or n < 2:
        raise UnsupportedRange(f"need d >= 1 and n >= 2, got d={d}, n={n}")
    ambient = projective_space(d * (n - 1) - 1)

    def element(p):
        dim = d * (len(p) - 1) - 1
        space = POINT if dim == 0 else projective_space(dim)
        return ElementDescriptor(polydiagonal_id(p, n), dim, space, polydiagonal_origin(p))

    parts: dict[str, Partition] = {}
    gens = []
    for size in range(2, n):
        for s in combinations(range(1, n + 1), size):
            p = _single_block(n, s)
            e = element(p)
            parts[e.id] = p
            gens.append(e)

    def meet(a, b):
        j = partition_join(parts[a.id], parts[b.id])
        if len(j) == 1:
            return None
        e = element(j)
        parts.setdefault(e.id, j)
        return e

    arr = close_under_meet(ambient, gens, meet)
    return ambient, BuildingSet(arr, frozenset(g.id for g in gens))


# -- Kapranov ---------------------------------------------------------------


def kapranov_m0n(n: int) -> tuple[SpaceExpr, BuildingSet]:
    """``M_{0,n}`` as the wonderful compactification of ``P^(n-3)``.

    Members are the linear spans of the ``n-1`` general points taken at most
    ``n-4`` at a time.  Disjoint index sets give empty meets, which is only
    right while the spans are too small to meet by dimension count, hence
    ``n <= 6``.
    """
    if not 5 <= n <= 6:
        raise UnsupportedRange(
            f"kapranov_m0n supports 5 <= n <= 6 (got n={n}); for n >= 7 spans with disjoint "
            "index sets meet outside the span lattice"
        )
    ambient = projective_space(n - 3)

    def span(s):
        space = POINT if len(s) == 1 else projective_space(len(s) - 1)
        name = ("p" if len(s) == 1 else "L" if len(s) == 2 else "S") + "".join(map(str, s))
        return ElementDescriptor(name, len(s) - 1, space, "span{" + ",".join(map(str, s)) + "}")

    sets = {}
    gens = []
    for size in range(1, n - 3):
        for s in combinations(range(1, n), size):
            e = span(s)
            sets[e.id] = frozenset(s)
            gens.append(e)

    def meet(a, b):
        common = sets[a.id] & sets[b.id]
        if not common:
            expected = a.dim + b.dim - (n - 3)
            if expected >= 0:
                raise UnsupportedRange(f"spans {a.id} and {b.id} meet outside the span lattice")
            return None
        e = span(tuple(sorted(common)))
        sets.setdefault(e.id, frozenset(common))
        return e

    arr = close_under_meet(ambient, gens, meet)
    return ambient, BuildingSet(arr, frozenset(g.id for g in gens))


# -- towers -----------------------------------------------------------------


@dataclass(frozen=True)
class Center:
    label: str
    space: SpaceExpr
    codim: int


@dataclass(frozen=True)
class TowerStep:
    label: str
    centers: tuple[Center, ...]


@dataclass(frozen=True)
class TowerDescription:
    """A base space followed by stages of blowups along disjoint centers."""

    name: str
    base: SpaceExpr
    steps: tuple[TowerStep, ...] = ()

    def space(self) -> SpaceExpr:
        """The resulting space; a stage's disjoint centers are blown up one after another."""
        x = self.base
        for step in self.steps:
            for c in step.centers:
                x = blow_up(x, c.space, c.codim)
        return x

    @property
    def dim(self) -> int:
        return self.base.dim

    def center_count(self) -> int:
        return sum(len(s.centers) for s in self.steps)


class TowerError(ValueError):
    pass


def _check_disjoint(step_label: str, sets: Sequence[frozenset]):
    # two boundary strata of the same size intersect only if nested
    for a, b in combinations(sets, 2):
        if a <= b or b <= a:
            raise TowerError(f"stage {step_label}: centers {sorted(a)} and {sorted(b)} are not disjoint")


@lru_cache(maxsize=None)
def _default_m0(j: int) -> SpaceExpr:
    return keel_tower(j - 1).space()


def m0n_space(j: int, m0_atoms: Mapping[int, SpaceExpr] | None = None) -> SpaceExpr:
    """``M_{0,j}``: a supplied atom if given, else built recursively from Keel's tower."""
    if m0_atoms and j in m0_atoms:
        return m0_atoms[j]
    if j < 3:
        raise UnsupportedRange(f"M_0,{j} is not defined")
    if j == 3:
        return POINT
    if j == 4:
        return projective_space(1)
    if not m0_atoms:
        return _default_m0(j)
    return keel_tower(j - 1, m0_atoms).space()


def keel_centers(n: int) -> dict[int, list[frozenset]]:
    """Index sets ``T`` of the centers, grouped by ``|T|``.

    ``T`` runs over subsets of ``{1..n}`` with ``|T| >= 2`` containing at most
    one of the three points fixed by the map to ``M_{0,4}``; the center is
    the section over the boundary divisor ``D^T`` of ``M_{0,n}``, isomorphic
    to ``M_{0,|T|+1} x M_{0,n-|T|+1}``.
    """
    out: dict[int, list[frozenset]] = {}
    for size in range(2, n - 1):
        for t in combinations(range(1, n + 1), size):
            if len(set(t) & {1, 2, 3}) <= 1:
                out.setdefault(size, []).append(frozenset(t))
    return out


def keel_tower(
    n: int,
    m0_atoms: Mapping[int, SpaceExpr] | None = None,
    centers: Mapping[int, Sequence[frozenset]] | None = None,
) -> TowerDescription:
    """Keel's ``M_{0,n+1}`` as blowups of ``M_{0,n} x P^1``.

    Stages run ``B_1 -> ... -> B_{n-2}``, blowing up the centers with the
    largest ``T`` first.  ``centers`` overrides :func:`keel_centers`.
    """
    if n < 4:
        raise UnsupportedRange(f"keel_tower needs n >= 4, got {n}")

    def m0(j):
        return m0n_space(j, m0_atoms)

    base = product(m0(n), projective_space(1))
    table = keel_centers(n) if centers is None else {k: [frozenset(t) for t in v] for k, v in centers.items()}
    steps = []
    for k in range(2, n - 1):
        size = n - k
        sets = sorted(table.get(size, []), key=lambda t: sorted(t))
        _check_disjoint(f"B_{k}", sets)
        cs = []
        for t in sets:
            space = product(m0(len(t) + 1), m0(n - len(t) + 1))
            label = "D^{" + ",".join(map(str, sorted(t))) + "}"
            cs.append(Center(label, space, base.dim - space.dim))
        steps.append(TowerStep(f"B_{k}", tuple(cs)))
    return TowerDescription(f"M_0,{n + 1}", base, tuple(steps))


def tdn_dim(d: int, n: int) -> int:
    if n == 1:
        return 0
    return d * (n - 1) - 1


def tdn_space(d: int, n: int, t_atoms: Mapping[tuple[int, int], SpaceExpr] | None = None) -> SpaceExpr:
    if t_atoms and (d, n) in t_atoms:
        return t_atoms[(d, n)]
    return tdn_tower(d, n, t_atoms).space()


def tdn_centers(n: int) -> dict[int, list[frozenset]]:
    """Clusters ``S`` of the old points that the new point can join, by ``|S|``.

    Building ``T_{d,n}`` from ``T_{d,n-1}``: the new point colliding with the
    cluster ``S`` of ``m = n-1`` old points is a locus isomorphic to
    ``T_{d,m-|S|+1} x T_{d,|S|}``, for ``1 <= |S| <= m-1``.
    """
    m = n - 1
    out: dict[int, list[frozenset]] = {}
    for size in range(1, m):
        for s in combinations(range(1, m + 1), size):
            out.setdefault(size, []).append(frozenset(s))
    return out


def tdn_tower(
    d: int,
    n: int,
    t_atoms: Mapping[tuple[int, int], SpaceExpr] | None = None,
    centers: Mapping[int, Sequence[frozenset]] | None = None,
) -> TowerDescription:
    """``T_{d,n}`` as blowups of a ``P^d``-bundle over ``T_{d,n-1}``.

    Grounded in ``T_{d,2} = P^(d-1)`` and ``T_{1,3} = P^1``; ``T_{d,1}`` is a
    point.  Larger clusters are blown up first.
    """
    if d < 1 or n < 2:
        raise UnsupportedRange(f"tdn_tower needs d >= 1 and n >= 2, got d={d}, n={n}")
    name = f"T_{d},{n}"
    if n == 2:
        return TowerDescription(name, projective_space(d - 1) if d > 1 else POINT)
    if d == 1 and n == 3:
        return TowerDescription(name, projective_space(1))

    def t(dd, j):
        if j == 1:
            return POINT
        return tdn_space(dd, j, t_atoms)

    base = proj_bundle(t(d, n - 1), d + 1)
    m = n - 1
    table = tdn_centers(n) if centers is None else {k: [frozenset(s) for s in v] for k, v in centers.items()}
    steps = []
    for size in sorted(table, reverse=True):
        sets = sorted(table[size], key=lambda s: sorted(s))
        _check_disjoint(f"|S|={size}", sets)
        cs = []
        for s in sets:
            space = product(t(d, m - len(s) + 1), t(d, len(s))) if len(s) > 1 else t(d, m)
            label = "S{" + ",".join(map(str, sorted(s))) + "}"
            cs.append(Center(label, space, base.dim - space.dim))
        steps.append(TowerStep(f"|S|={size}", tuple(cs)))
    return TowerDescription(name, base, tuple(steps))


__all__ = [
    "UnsupportedRange",
    "TowerError",
    "Center",
    "TowerStep",
    "TowerDescription",
    "partition_join",
    "set_partitions",
    "fm_building_set",
    "polydiagonal_building_set",
    "ulyanov_building_set",
    "affine_polydiagonal_building_set",
    "kapranov_m0n",
    "keel_centers",
    "keel_tower",
    "m0n_space",
    "tdn_centers",
    "tdn_tower",
    "tdn_space",
    "tdn_dim",
]
