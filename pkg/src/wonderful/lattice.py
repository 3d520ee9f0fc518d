"""Arrangements of subvarieties and building sets, as finite meet tables.

An arrangement never stores geometry.  Each element carries the isomorphism
type of the subvariety (a space expression) and the meet table records which
element, if any, is the intersection of two others.  Generators supply the
meets through an oracle (partition joins for diagonals, index-set
intersection for linear spans).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional

from .space import SpaceExpr, atom, render

EMPTY_MARK = "∅"


class ArrangementError(ValueError):
    """Malformed arrangement data; ``pair`` names the offending elements when known."""

    def __init__(self, message: str, pair: tuple[str, ...] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class ElementDescriptor:
    id: str
    dim: int
    space: SpaceExpr
    origin: str = ""

    def __post_init__(self):
        if self.id == EMPTY_MARK or not self.id:
            raise ArrangementError(f"invalid element id {self.id!r}")
        if self.dim != self.space.dim:
            raise ArrangementError(
                f"element {self.id}: dim {self.dim} disagrees with dim of {render(self.space)} ({self.space.dim})"
            )


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Arrangement:
    """A meet-closed family of smooth subvarieties of ``ambient``.

    ``meet`` is keyed on sorted id pairs (including the diagonal) and maps to
    an element id or :data:`EMPTY_MARK`.
    """

    ambient: SpaceExpr
    elements: Mapping[str, ElementDescriptor]
    meet_table: Mapping[tuple[str, str], str]
    leq_pairs: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        leq = set()
        for (a, b), m in self.meet_table.items():
            if m == a:
                leq.add((a, b))
            if m == b:
                leq.add((b, a))
        object.__setattr__(self, "leq_pairs", frozenset(leq))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, eid):
        return eid in self.elements

    def __getitem__(self, eid) -> ElementDescriptor:
        return self.elements[eid]

    def meet(self, a: str, b: str) -> str:
        try:
            return self.meet_table[_key(a, b)]
        except KeyError:
            raise ArrangementError(f"meet table has no entry for ({a}, {b})", (a, b)) from None

    def leq(self, a: str, b: str) -> bool:
        """``a`` is contained in ``b``."""
        return (a, b) in self.leq_pairs

    @property
    def ambient_dim(self) -> int:
        return self.ambient.dim

    def codim(self, eid: str) -> int:
        return self.ambient.dim - self.elements[eid].dim

    def check(self) -> None:
        """Verify the lattice axioms; raise :class:`ArrangementError` on the first failure."""
        ids = sorted(self.elements)
        for a in ids:
            if self.meet(a, a) != a:
                raise ArrangementError(f"meet({a}, {a}) is not {a}", (a, a))
        for a, b in combinations(ids, 2):
            m = self.meet(a, b)
            if m == EMPTY_MARK:
                continue
            if m not in self.elements:
                raise ArrangementError(f"meet({a}, {b}) = {m} is not an element", (a, b))
            if self.elements[m].dim > min(self.elements[a].dim, self.elements[b].dim):
                raise ArrangementError(f"meet({a}, {b}) = {m} has too large a dimension", (a, b))
            if not (self.leq(m, a) and self.leq(m, b)):
                raise ArrangementError(f"meet({a}, {b}) = {m} is not below both arguments", (a, b))
            if self.leq(a, b) and self.leq(b, a):
                raise ArrangementError(f"{a} and {b} contain each other", (a, b))
        for a, b, c in combinations(ids, 3):
            left = self._meet3(self.meet(a, b), c)
            right = self._meet3(a, self.meet(b, c))
            if left != right:
                raise ArrangementError(f"meet is not associative on ({a}, {b}, {c})", (a, b, c))

    def _meet3(self, x: str, y: str) -> str:
        if EMPTY_MARK in (x, y):
            return EMPTY_MARK
        return self.meet(x, y)

    def meet_of(self, ids: Iterable[str]) -> str:
        """Iterated meet of a nonempty collection."""
        it = iter(ids)
        out = next(it)
        for x in it:
            out = self._meet3(out, x)
            if out == EMPTY_MARK:
                break
        return out

    def with_space(self, eid: str, space: SpaceExpr) -> Arrangement:
        """A copy where one element's isomorphism type is replaced (same dimension)."""
        old = self.elements[eid]
        elements = dict(self.elements)
        elements[eid] = ElementDescriptor(eid, old.dim, space, old.origin)
        return Arrangement(self.ambient, elements, self.meet_table)


MeetOracle = Callable[[ElementDescriptor, ElementDescriptor], Optional[ElementDescriptor]]


def close_under_meet(
    ambient: SpaceExpr, generators: Iterable[ElementDescriptor], meet_oracle: MeetOracle
) -> Arrangement:
    """Smallest meet-closed family containing ``generators``.

    ``meet_oracle(a, b)`` returns the descriptor of the intersection or
    ``None`` when it is empty.
    """
    elements: dict[str, ElementDescriptor] = {}
    for g in generators:
        if g.id in elements and elements[g.id] != g:
            raise ArrangementError(f"two generators share id {g.id}", (g.id,))
        elements[g.id] = g
    table: dict[tuple[str, str], str] = {(e, e): e for e in elements}
    pending = sorted(elements)
    done: list[str] = []
    while pending:
        a = pending.pop(0)
        for b in done + [a]:
            if _key(a, b) in table:
                continue
            ea, eb = elements[a], elements[b]
            m1, m2 = meet_oracle(ea, eb), meet_oracle(eb, ea)
            id1 = None if m1 is None else m1.id
            id2 = None if m2 is None else m2.id
            if id1 != id2:
                raise ArrangementError(f"meet oracle is not commutative on ({a}, {b}): {id1} vs {id2}", (a, b))
            if m1 is None:
                table[_key(a, b)] = EMPTY_MARK
                continue
            if m1.dim > min(ea.dim, eb.dim):
                raise ArrangementError(
                    f"meet oracle gives {m1.id} of dim {m1.dim} for ({a}, {b}) of dims {ea.dim}, {eb.dim}", (a, b)
                )
            if m1.id in elements:
                if elements[m1.id] != m1:
                    raise ArrangementError(f"meet oracle returned conflicting descriptors for {m1.id}", (a, b))
            else:
                elements[m1.id] = m1
                table[(m1.id, m1.id)] = m1.id
                pending.append(m1.id)
            table[_key(a, b)] = m1.id
        done.append(a)
    arr = Arrangement(ambient, elements, table)
    for (a, b), m in table.items():
        if m != EMPTY_MARK and a != b and not (arr.leq(m, a) and arr.leq(m, b)):
            raise ArrangementError(f"meet oracle: {m} = meet({a}, {b}) is not contained in both", (a, b))
    return arr


def arrangement_from_table(
    ambient: SpaceExpr,
    elements: Iterable[ElementDescriptor],
    meets: Iterable[tuple[str, str, str]],
    leq: Iterable[tuple[str, str]] | None = None,
) -> Arrangement:
    """Assemble a user-supplied arrangement and check it.

    Diagonal entries and entries implied by ``leq`` (``a <= b`` gives
    ``meet(a, b) = a``) may be omitted from ``meets``.
    """
    elems = {}
    for e in elements:
        if e.id in elems:
            raise ArrangementError(f"duplicate element id {e.id}", (e.id,))
        elems[e.id] = e
    table: dict[tuple[str, str], str] = {(e, e): e for e in elems}

    def put(a, b, m):
        for x in (a, b):
            if x not in elems:
                raise ArrangementError(f"unknown element {x}", (a, b))
        k = _key(a, b)
        if k in table and table[k] != m:
            raise ArrangementError(f"conflicting meet entries for ({a}, {b}): {table[k]} vs {m}", (a, b))
        table[k] = m

    for a, b in leq or ():
        put(a, b, a)
    for a, b, m in meets:
        put(a, b, m)
    missing = [(a, b) for a, b in combinations(sorted(elems), 2) if (a, b) not in table]
    if missing:
        raise ArrangementError(f"meet table incomplete, e.g. ({missing[0][0]}, {missing[0][1]})", missing[0])
    arr = Arrangement(ambient, elems, table)
    arr.check()
    return arr


@dataclass(frozen=True)
class BuildingSet:
    arrangement: Arrangement
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        unknown = self.members - set(self.arrangement.elements)
        if unknown:
            raise ArrangementError(f"members not in the arrangement: {sorted(unknown)}")

    @property
    def ambient(self) -> SpaceExpr:
        return self.arrangement.ambient

    def closure(self) -> list[str]:
        """Ids of all nonempty intersections of members (members included)."""
        arr = self.arrangement
        found = set(self.members)
        frontier = set(self.members)
        while frontier:
            new = set()
            for a in frontier:
                for b in found | new:
                    m = arr.meet(a, b)
                    if m != EMPTY_MARK and m not in found and m not in new:
                        new.add(m)
            found |= new
            frontier = new
        return sorted(found)

    def has_empty_intersections(self) -> bool:
        ids = self.closure()
        return any(self.arrangement.meet(a, b) == EMPTY_MARK for a, b in combinations(ids, 2))

    def with_element_space(self, eid: str, space: SpaceExpr) -> BuildingSet:
        return BuildingSet(self.arrangement.with_space(eid, space), self.members)


def poison(bs: BuildingSet, eid: str, ordinary, hodge_witt=None) -> BuildingSet:
    """Replace one element by an opaque atom with the given facts.

    Used to test that every element's ordinarity matters.
    """
    e = bs.arrangement[eid]
    return bs.with_element_space(eid, atom(f"[{eid}]", e.dim, ordinary, hodge_witt))


@dataclass(frozen=True)
class Violation:
    element: str
    check: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...]
    verdicts: Mapping[str, str]
    transversality: str = "combinatorial"

    def __bool__(self):
        return self.valid


def is_building_set(arr: Arrangement, members: Iterable[str]) -> ValidationReport:
    """Check the building-set condition for every non-member.

    For each non-member ``S`` the inclusion-minimal members containing it must
    meet exactly in ``S``, and transversally.  Transversality is tested
    combinatorially as additivity of codimension.
    """
    members = set(members)
    violations = []
    verdicts = {}
    for s in sorted(arr.elements):
        if s in members:
            verdicts[s] = "member"
            continue
        above = [g for g in members if arr.leq(s, g)]
        minimal = sorted(g for g in above if not any(h != g and arr.leq(h, g) for h in above))
        if not minimal:
            violations.append(Violation(s, "covered", f"no member contains {s}"))
            verdicts[s] = "uncovered"
            continue
        ok = True
        m = arr.meet_of(minimal)
        if m != s:
            violations.append(Violation(s, "meet", f"minimal members {minimal} meet in {m}, not {s}"))
            ok = False
        total = sum(arr.codim(g) for g in minimal)
        if total != arr.codim(s):
            violations.append(
                Violation(
                    s,
                    "transversality",
                    f"codim({s}) = {arr.codim(s)} but minimal members {minimal} have codims summing to {total}",
                )
            )
            ok = False
        verdicts[s] = "ok " + "·".join(minimal) if ok else "violated"
    return ValidationReport(not violations, tuple(violations), verdicts)


def inclusion_order(bs: BuildingSet) -> list[str]:
    """Members sorted so that smaller ones come first.

    Ascending dimension, ties broken by origin label then id; then checked
    against the containment relation.
    """
    arr = bs.arrangement
    order = sorted(bs.members, key=lambda g: (arr[g].dim, arr[g].origin, g))
    pos = {g: i for i, g in enumerate(order)}
    for a in order:
        for b in order:
            if a != b and arr.leq(a, b):
                if arr.leq(b, a):
                    raise ArrangementError(f"containment cycle between {a} and {b}", (a, b))
                if pos[a] > pos[b]:
                    raise ArrangementError(f"{a} is contained in {b} but not of smaller dimension", (a, b))
    return order
