import pytest

from wonderful.blowup import (
    InvalidBuildingSet,
    Locus,
    StageElement,
    TraceError,
    TransformCase,
    blowup_step,
    dominant_transform,
    initial_stage,
    wonderful,
)
from wonderful.constructions import fm_building_set, kapranov_m0n, polydiagonal_building_set
from wonderful.lattice import EMPTY_MARK, ArrangementError, BuildingSet, ElementDescriptor, arrangement_from_table
from wonderful.space import POINT, Blowup, ProjBundle, atom, blow_up, proj_bundle, projective_space

P1, P2, P3 = (projective_space(d) for d in (1, 2, 3))


def el(eid, space):
    return StageElement(eid, None, space, ((0, eid),))


# hand-built fixtures in P3: a plane H, a line L, a point p, a skew line M
H, L, p, M = el("H", P2), el("L", P1), el("p", POINT), el("M", P1)
ELEMS = {e.id: e for e in (H, L, p, M)}


def test_equal_is_exceptional_divisor():
    t = dominant_transform(L, L, P3, "L", ELEMS)
    assert t.case is TransformCase.EQUAL
    assert t.space == proj_bundle(P1, 2)
    assert t.dim == P3.dim - 1


def test_pullback_when_inside_center():
    # p lies on L: its transform is the fibre P(N_L|p)
    t = dominant_transform(p, L, P3, "p", ELEMS)
    assert t.case is TransformCase.PULLBACK
    assert t.space == ProjBundle(POINT, 2)
    assert t.dim == p.space.dim + (P3.dim - L.space.dim) - 1


def test_disjoint_is_unchanged():
    t = dominant_transform(M, L, P3, EMPTY_MARK, ELEMS)
    assert t.case is TransformCase.DISJOINT
    assert t.space == M.space


def test_generic_is_strict_transform():
    # H meets L in p: H is blown up at p with codim dim H - dim p
    t = dominant_transform(H, L, P3, "p", ELEMS)
    assert t.case is TransformCase.STRICT
    assert t.space == Blowup(P2, POINT, 2)
    assert t.dim == H.dim


def test_locus_meet():
    t = dominant_transform(H, L, P3, Locus(POINT), ELEMS)
    assert t.case is TransformCase.STRICT and t.space == blow_up(P2, POINT, 2)
    t = dominant_transform(L, H, P3, Locus(P1), ELEMS)
    assert t.case is TransformCase.PULLBACK


def test_meet_larger_than_element_rejected():
    with pytest.raises(TraceError):
        dominant_transform(p, H, P3, "L", ELEMS)


def plane_line_point():
    elems = [
        ElementDescriptor("H", 2, P2, "plane"),
        ElementDescriptor("L", 1, P1, "line"),
        ElementDescriptor("p", 0, POINT, "point"),
    ]
    arr = arrangement_from_table(P3, elems, [("H", "L", "p")], leq=[("p", "H"), ("p", "L")])
    return BuildingSet(arr, {"H", "L", "p"})


def test_trace_on_plane_line_point():
    bs = plane_line_point()
    tr = wonderful(P3, bs)
    assert tr.order == ("p", "L", "H")
    s1, s2, s3 = tr.steps
    assert {k: e.case for k, e in s1.elements.items()} == {
        "p": TransformCase.EQUAL,
        "L": TransformCase.STRICT,
        "H": TransformCase.STRICT,
    }
    assert s1.elements["L"].space == blow_up(P1, POINT, 1)
    # H and L met only at p, so they are separated
    assert s1.meet_entry("H", "L") == EMPTY_MARK
    # L's strict transform meets the exceptional divisor in a point
    assert s1.meet_entry("L", "p") == Locus(ProjBundle(POINT, 1))
    assert s2.elements["H"].case is TransformCase.DISJOINT
    assert s2.elements["p"].case is TransformCase.STRICT
    assert s3.elements["H"].case is TransformCase.EQUAL
    assert all(s.ambient.dim == 3 for s in tr.stages)
    assert len(tr) == 3


def test_out_of_order_step_rejected():
    bs = plane_line_point()
    st = initial_stage(bs)
    with pytest.raises(TraceError, match="out-of-order"):
        blowup_step(st, "H")
    st = blowup_step(blowup_step(blowup_step(st, "p"), "L"), "H")
    with pytest.raises(TraceError):
        blowup_step(st, "H")


def test_invalid_building_set_refused():
    _, bs = polydiagonal_building_set(atom("X", 1), 4, [[(1, 2, 3)], [(1, 2, 4)]])
    with pytest.raises(InvalidBuildingSet) as err:
        wonderful(bs.ambient, bs)
    assert err.value.report.violations[0].element == "D1234"


def test_ambient_must_match():
    bs = plane_line_point()
    with pytest.raises(ArrangementError):
        wonderful(P2, bs)


def test_fm_two_points():
    amb, bs = fm_building_set(P2, 2)
    tr = wonderful(amb, bs)
    assert tr.final_space == blow_up(amb, P2, 2)
    assert tr.steps[0].elements["D12"].space == proj_bundle(P2, 2)
    assert tr.steps[0].elements["D12"].dim == amb.dim - 1


def test_kapranov_six_cases():
    amb, bs = kapranov_m0n(6)
    tr = wonderful(amb, bs)
    assert tr.order[:5] == ("p1", "p2", "p3", "p4", "p5")
    first = tr.steps[0]
    lines_through = {k for k in first.elements if k.startswith("L") and "1" in k}
    for k, e in first.elements.items():
        if k in lines_through:
            assert e.case is TransformCase.STRICT
        elif k == "p1":
            assert e.case is TransformCase.EQUAL
        else:
            assert e.case is TransformCase.DISJOINT
    # each line ends up blown up at its two points, still a P1
    final_l = tr.stages[5].elements["L12"]
    assert final_l.space.dim == 1


def test_origin_chain_grows():
    amb, bs = fm_building_set(P1, 3)
    tr = wonderful(amb, bs)
    chain = tr.stages[-1].elements["D12"].origin_chain
    assert [k for k, _ in chain] == list(range(len(tr) + 1))


def test_kapranov_five_first_point():
    amb, bs = kapranov_m0n(5)
    first = wonderful(amb, bs).steps[0]
    assert first.center == "p1"
    assert {k: str(e.case) for k, e in first.elements.items()} == {
        "p1": "Equal",
        "p2": "Disjoint",
        "p3": "Disjoint",
        "p4": "Disjoint",
    }
