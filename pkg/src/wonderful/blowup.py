"""Dominant transforms and the iterated blowup along a building set.

Members are blown up one at a time, smallest first.  After each blowup
every element of the arrangement is replaced by its dominant transform and
the meet table is updated:

* two transforms whose old intersection lay in the center, while neither
  of them did, are separated (their new meet is empty);
* two transforms that both lay in the center meet in the preimage of their
  old meet;
* when exactly one of them lay in the center, their intersection sits in
  the exceptional divisor and is not an element of the arrangement.  It is
  kept as a :class:`Locus`: the projectivized normal bundle of
  ``other & center`` in ``other``, restricted to the old meet.  A locus is
  not transformed by later blowups.

Only the last rule goes beyond what the arrangement itself determines; it
never enters the transform of a member that is still waiting to be blown up.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Union

from .lattice import EMPTY_MARK, BuildingSet, ArrangementError, inclusion_order, is_building_set
from .space import SpaceExpr, blow_up, proj_bundle, render


class TransformCase(enum.Enum):
    EQUAL = "Equal"
    PULLBACK = "Pullback"
    DISJOINT = "Disjoint"
    STRICT = "Strict"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Locus:
    """An intersection inside an exceptional divisor, outside the arrangement."""

    space: SpaceExpr

    @property
    def dim(self) -> int:
        return self.space.dim


MeetEntry = Union[str, Locus]


@dataclass(frozen=True)
class StageElement:
    id: str
    case: TransformCase | None
    space: SpaceExpr
    origin_chain: tuple[tuple[int, str], ...]

    @property
    def dim(self) -> int:
        return self.space.dim


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class Stage:
    """One step ``(X_k, S^(k))`` of the tower.  Stage 0 has no center."""

    index: int
    center: str | None
    ambient: SpaceExpr
    elements: Mapping[str, StageElement]
    meet: Mapping[tuple[str, str], MeetEntry]
    remaining: tuple[str, ...]

    def meet_entry(self, a: str, b: str) -> MeetEntry:
        key = (a, b) if a <= b else (b, a)
        try:
            return self.meet[key]
        except KeyError:
            raise TraceError(f"stage {self.index}: no meet entry for ({a}, {b})") from None

    def contained(self, a: str, b: str) -> bool:
        """Whether the current transform of ``a`` lies inside that of ``b``."""
        if a == b:
            return True
        m = self.meet_entry(a, b)
        if isinstance(m, Locus):
            return m.dim == self.elements[a].dim
        return m == a

    def entry_space(self, m: MeetEntry) -> SpaceExpr:
        return m.space if isinstance(m, Locus) else self.elements[m].space

    def entry_dim(self, m: MeetEntry) -> int:
        return self.entry_space(m).dim


@dataclass(frozen=True)
class BlowupTrace:
    building_set: BuildingSet
    order: tuple[str, ...]
    stages: tuple[Stage, ...]

    @property
    def initial(self) -> Stage:
        return self.stages[0]

    @property
    def steps(self) -> tuple[Stage, ...]:
        return self.stages[1:]

    @property
    def final_space(self) -> SpaceExpr:
        return self.stages[-1].ambient

    def __len__(self):
        return len(self.stages) - 1


def initial_stage(bs: BuildingSet, order=None) -> Stage:
    arr = bs.arrangement
    if order is None:
        order = inclusion_order(bs)
    elements = {
        eid: StageElement(eid, None, e.space, ((0, eid),)) for eid, e in sorted(arr.elements.items())
    }
    return Stage(0, None, arr.ambient, elements, dict(arr.meet_table), tuple(order))


def dominant_transform(
    y: StageElement, z: StageElement, ambient: SpaceExpr, meet: MeetEntry, elements: Mapping[str, StageElement]
) -> StageElement:
    """Transform of ``y`` under the blowup of ``ambient`` along ``z``.

    ``meet`` is the current meet entry of ``(y, z)``; ``elements`` resolves
    element ids to their current transforms.
    """
    codim_z = ambient.dim - z.dim
    chain = y.origin_chain
    if y.id == z.id:
        return StageElement(y.id, TransformCase.EQUAL, proj_bundle(z.space, codim_z), chain)
    if meet == EMPTY_MARK:
        return StageElement(y.id, TransformCase.DISJOINT, y.space, chain)
    if isinstance(meet, Locus):
        w_space, w_dim = meet.space, meet.dim
    else:
        if meet not in elements:
            raise TraceError(f"meet entry {meet!r} of ({y.id}, {z.id}) is not an element")
        w_space, w_dim = elements[meet].space, elements[meet].dim
        if meet == y.id:
            return StageElement(y.id, TransformCase.PULLBACK, proj_bundle(y.space, codim_z), chain)
    if w_dim > y.dim:
        raise TraceError(f"meet of ({y.id}, {z.id}) has dimension {w_dim} > dim {y.id} = {y.dim}")
    if w_dim == y.dim:
        return StageElement(y.id, TransformCase.PULLBACK, proj_bundle(y.space, codim_z), chain)
    return StageElement(y.id, TransformCase.STRICT, blow_up(y.space, w_space, y.dim - w_dim), chain)


def blowup_step(stage: Stage, center_id: str) -> Stage:
    if not stage.remaining:
        raise TraceError("no centers left to blow up")
    if center_id != stage.remaining[0]:
        raise TraceError(
            f"out-of-order center {center_id}: next in inclusion order is {stage.remaining[0]}"
        )
    k = stage.index + 1
    z = stage.elements[center_id]
    ambient = blow_up(stage.ambient, z.space, stage.ambient.dim - z.dim)

    elements = {}
    for eid, y in stage.elements.items():
        entry = y.id if y.id == z.id else stage.meet_entry(eid, center_id)
        t = dominant_transform(y, z, stage.ambient, entry, stage.elements)
        elements[eid] = StageElement(eid, t.case, t.space, y.origin_chain + ((k, eid),))

    inside = {eid: stage.contained(eid, center_id) for eid in stage.elements}
    meet = {}
    for (a, b), m in stage.meet.items():
        meet[(a, b)] = _update_meet(stage, a, b, m, center_id, inside)
    return Stage(k, center_id, ambient, elements, meet, stage.remaining[1:])


def _update_meet(stage: Stage, a: str, b: str, m: MeetEntry, center: str, inside: Mapping[str, bool]) -> MeetEntry:
    if a == b or m == EMPTY_MARK or isinstance(m, Locus):
        return m
    ia, ib = inside[a], inside[b]
    if not ia and not ib:
        return EMPTY_MARK if inside[m] else m
    if ia and ib:
        return m
    outer = b if ia else a
    # outer meets the center in its old intersection with it; the new meet is
    # the exceptional divisor of that blowup, restricted over m
    cut = stage.meet_entry(outer, center)
    if cut == EMPTY_MARK:
        raise TraceError(f"stage {stage.index}: {outer} misses {center} yet meets a subvariety of it")
    rank = stage.elements[outer].dim - stage.entry_dim(cut)
    if rank < 1:
        raise TraceError(f"stage {stage.index}: {outer} lies in {center} but was not recorded so")
    return Locus(proj_bundle(stage.entry_space(m), rank))


class InvalidBuildingSet(ArrangementError):
    def __init__(self, report):
        details = "; ".join(f"{v.element}: {v.check}" for v in report.violations)
        super().__init__(f"not a building set ({details})")
        self.report = report


def wonderful(ambient: SpaceExpr, bs: BuildingSet) -> BlowupTrace:
    """Run the iterated blowup ``X_k = Bl_{G_k^(k-1)} X_(k-1)`` to the end."""
    if ambient != bs.ambient:
        raise ArrangementError(f"ambient {render(ambient)} differs from the arrangement's {render(bs.ambient)}")
    report = is_building_set(bs.arrangement, bs.members)
    if not report.valid:
        raise InvalidBuildingSet(report)
    order = tuple(inclusion_order(bs))
    stages = [initial_stage(bs, order)]
    for g in order:
        stages.append(blowup_step(stages[-1], g))
    return BlowupTrace(bs, order, tuple(stages))
