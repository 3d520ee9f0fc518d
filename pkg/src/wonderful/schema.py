"""JSON forms of spaces, arrangements, traces, towers and certificates.

All documents carry ``"schema_version": 1`` and are written with sorted keys
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
from typing import Any

from .blowup import BlowupTrace, Locus, Stage, StageElement, TransformCase
from .certify import Certificate, Rule
from .constructions import Center, TowerDescription, TowerStep
from .lattice import (
    EMPTY_MARK,
    ArrangementError,
    BuildingSet,
    ElementDescriptor,
    ValidationReport,
    arrangement_from_table,
)
from .space import (
    EMPTY,
    POINT,
    Atom,
    Blowup,
    Empty,
    Point,
    Product,
    ProjBundle,
    PropertyFacts,
    SpaceExpr,
    Tristate,
    blow_up,
    proj_bundle,
    product,
)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _versioned(kind: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **body}


def check_version(doc: dict) -> None:
    v = doc.get("schema_version")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {v!r} (expected {SCHEMA_VERSION})")


# -- spaces -----------------------------------------------------------------


def space_to_json(s: SpaceExpr) -> dict:
    if isinstance(s, Empty):
        return {"kind": "empty"}
    if isinstance(s, Point):
        return {"kind": "point"}
    if isinstance(s, Atom):
        d = {
            "kind": "atom",
            "name": s.name,
            "dim": s.dim,
            "ordinary": str(s.facts.ordinary),
            "hodge_witt": str(s.facts.hodge_witt),
        }
        if s.facts.hw_from_ordinary:
            d["hodge_witt_from_ordinary"] = True
        if s.poincare is not None:
            d["poincare"] = list(s.poincare)
        return d
    if isinstance(s, Product):
        return {"kind": "product", "left": space_to_json(s.left), "right": space_to_json(s.right)}
    if isinstance(s, ProjBundle):
        return {"kind": "proj_bundle", "base": space_to_json(s.base), "fiber_rank": s.fiber_rank}
    if isinstance(s, Blowup):
        return {
            "kind": "blowup",
            "ambient": space_to_json(s.ambient),
            "center": space_to_json(s.center),
            "codim": s.codim,
        }
    raise TypeError(f"not a space expression: {s!r}")


def space_from_json(d: Any) -> SpaceExpr:
    try:
        kind = d["kind"]
        if kind == "empty":
            return EMPTY
        if kind == "point":
            return POINT
        if kind == "atom":
            o = Tristate.coerce(d.get("ordinary", "unknown"))
            h = Tristate.coerce(d.get("hodge_witt", "unknown"))
            derived = bool(d.get("hodge_witt_from_ordinary", False))
            facts = PropertyFacts(o, h, derived) if derived else PropertyFacts(o, h).normalized()
            poly = d.get("poincare")
            if poly is not None:
                from .space import atom

                checked = atom(d["name"], int(d["dim"]), poincare=poly)
                poly = checked.poincare
            if int(d["dim"]) < 0:
                raise SchemaError(f"atom {d['name']!r} has negative dimension")
            return Atom(str(d["name"]), int(d["dim"]), facts, poly)
        if kind == "product":
            return product(space_from_json(d["left"]), space_from_json(d["right"]))
        if kind == "proj_bundle":
            return proj_bundle(space_from_json(d["base"]), int(d["fiber_rank"]))
        if kind == "blowup":
            amb = space_from_json(d["ambient"])
            cen = space_from_json(d["center"])
            if isinstance(cen, Empty):
                raise SchemaError("a stored blowup cannot have an empty center")
            return blow_up(amb, cen, int(d["codim"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed space expression: {exc}") from exc
    raise SchemaError(f"unknown space kind {d.get('kind')!r}")


# -- arrangements -----------------------------------------------------------


def building_set_to_json(bs: BuildingSet) -> dict:
    arr = bs.arrangement
    ids = sorted(arr.elements)
    return _versioned(
        "building_set",
        {
            "ambient": space_to_json(arr.ambient),
            "elements": [
                {"id": e, "dim": arr[e].dim, "space": space_to_json(arr[e].space), "origin": arr[e].origin}
                for e in ids
            ],
            "leq": [[a, b] for a in ids for b in ids if a != b and arr.leq(a, b)],
            "meet": [[a, b, arr.meet(a, b)] for i, a in enumerate(ids) for b in ids[i + 1 :]],
            "members": sorted(bs.members),
        },
    )


def building_set_from_json(doc: dict) -> BuildingSet:
    check_version(doc)
    try:
        ambient = space_from_json(doc["ambient"])
        elements = []
        for e in doc["elements"]:
            space = space_from_json(e["space"])
            if "dim" in e and int(e["dim"]) != space.dim:
                raise SchemaError(f"element {e['id']}: dim {e['dim']} disagrees with its space")
            elements.append(ElementDescriptor(str(e["id"]), space.dim, space, str(e.get("origin", ""))))
        meets = [(str(a), str(b), str(m)) for a, b, m in doc.get("meet", [])]
        leq = [(str(a), str(b)) for a, b in doc.get("leq", [])]
        arr = arrangement_from_table(ambient, elements, meets, leq)
        members = doc.get("members")
        if members is None:
            members = sorted(arr.elements)
        return BuildingSet(arr, frozenset(members))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (SchemaError, ArrangementError)):
            raise
        raise SchemaError(f"malformed arrangement: {exc}") from exc


def report_to_json(report: ValidationReport) -> dict:
    return _versioned(
        "validation_report",
        {
            "valid": report.valid,
            "transversality": report.transversality,
            "violations": [
                {"element": v.element, "check": v.check, "detail": v.detail} for v in report.violations
            ],
            "elements": dict(report.verdicts),
        },
    )


# -- traces -----------------------------------------------------------------


def _entry_to_json(m):
    if isinstance(m, Locus):
        return {"locus": space_to_json(m.space)}
    return m


def _entry_from_json(m):
    if isinstance(m, dict):
        return Locus(space_from_json(m["locus"]))
    return str(m)


def trace_to_json(trace: BlowupTrace) -> dict:
    stages = []
    for st in trace.stages:
        stages.append(
            {
                "index": st.index,
                "center": st.center,
                "ambient": space_to_json(st.ambient),
                "elements": [
                    {
                        "id": el.id,
                        "case": None if el.case is None else el.case.value,
                        "dim": el.dim,
                        "space": space_to_json(el.space),
                        "origin_chain": [list(x) for x in el.origin_chain],
                    }
                    for _, el in sorted(st.elements.items())
                ],
                "meet": [[a, b, _entry_to_json(m)] for (a, b), m in sorted(st.meet.items()) if a != b],
            }
        )
    return _versioned(
        "trace",
        {
            "building_set": building_set_to_json(trace.building_set),
            "order": list(trace.order),
            "stages": stages,
            "final_space": space_to_json(trace.final_space),
        },
    )


def trace_from_json(doc: dict) -> BlowupTrace:
    check_version(doc)
    try:
        bs = building_set_from_json(doc["building_set"])
        order = tuple(doc["order"])
        stages = []
        for i, sd in enumerate(doc["stages"]):
            if sd["index"] != i:
                raise SchemaError(f"stage {i} is labelled {sd['index']}")
            elements = {}
            for e in sd["elements"]:
                case = None if e["case"] is None else TransformCase(e["case"])
                space = space_from_json(e["space"])
                if int(e["dim"]) != space.dim:
                    raise SchemaError(f"stage {i}, element {e['id']}: dim disagrees with space")
                chain = tuple((int(k), str(x)) for k, x in e["origin_chain"])
                elements[e["id"]] = StageElement(e["id"], case, space, chain)
            meet = {(e, e): e for e in elements}
            for a, b, m in sd["meet"]:
                key = (a, b) if a <= b else (b, a)
                meet[key] = _entry_from_json(m)
            stages.append(
                Stage(i, sd["center"], space_from_json(sd["ambient"]), elements, meet, order[i:])
            )
        trace = BlowupTrace(bs, order, tuple(stages))
        final = space_from_json(doc["final_space"])
        if final != trace.final_space:
            raise SchemaError("final_space does not match the last stage's ambient")
        return trace
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (SchemaError, ArrangementError)):
            raise
        raise SchemaError(f"malformed trace: {exc}") from exc


# -- towers -----------------------------------------------------------------


def tower_to_json(tower: TowerDescription) -> dict:
    return _versioned(
        "tower",
        {
            "name": tower.name,
            "base": space_to_json(tower.base),
            "steps": [
                {
                    "label": st.label,
                    "centers": [
                        {"label": c.label, "space": space_to_json(c.space), "codim": c.codim} for c in st.centers
                    ],
                }
                for st in tower.steps
            ],
            "final_space": space_to_json(tower.space()),
        },
    )


def tower_from_json(doc: dict) -> TowerDescription:
    check_version(doc)
    try:
        steps = tuple(
            TowerStep(
                st["label"],
                tuple(Center(c["label"], space_from_json(c["space"]), int(c["codim"])) for c in st["centers"]),
            )
            for st in doc["steps"]
        )
        return TowerDescription(doc.get("name", "tower"), space_from_json(doc["base"]), steps)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed tower: {exc}") from exc


# -- certificates -----------------------------------------------------------


def certificate_from_json(d: dict) -> Certificate:
    try:
        claim = d["claim"]
        rule = Rule(d["rule"])
        premises = tuple(certificate_from_json(p) for p in d.get("premises", []))
        a = None
        if "atom" in d:
            rec = d["atom"]
            a = Atom(
                rec["name"],
                int(rec.get("dim", 0)),
                PropertyFacts(Tristate.coerce(rec["ordinary"]), Tristate.coerce(rec["hodge_witt"])),
            )
        return Certificate(
            claim["subject"], claim["property"], Tristate.coerce(claim["verdict"]), rule, premises, a, d.get("detail")
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed certificate: {exc}") from exc


def load(doc: dict):
    """Dispatch on ``kind``."""
    kind = doc.get("kind")
    if kind == "building_set":
        return building_set_from_json(doc)
    if kind == "trace":
        return trace_from_json(doc)
    if kind == "tower":
        return tower_from_json(doc)
    if kind == "space":
        check_version(doc)
        return space_from_json(doc["space"])
    if kind == "certificate":
        check_version(doc)
        return certificate_from_json(doc["certificate"])
    raise SchemaError(f"unknown document kind {kind!r}")


__all__ = [
    "SCHEMA_VERSION",
    "SchemaError",
    "dumps",
    "space_to_json",
    "space_from_json",
    "building_set_to_json",
    "building_set_from_json",
    "report_to_json",
    "trace_to_json",
    "trace_from_json",
    "tower_to_json",
    "tower_from_json",
    "certificate_from_json",
    "load",
    "EMPTY_MARK",
]
