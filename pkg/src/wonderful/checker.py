"""Re-check a certificate from its JSON form alone.

This does not import the certifier.  Each node's verdict is recomputed from
its premises with truth tables written out here over the strings ``"true"``,
``"false"`` and ``"unknown"``, and every leaf is compared with the atom
record it cites.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_RANK = {"false": 0, "unknown": 1, "true": 2}
_NAME = {v: k for k, v in _RANK.items()}

_PREMISE_COUNT = {
    "EKEDAHL_PRODUCT": 4,
    "ILLUSIE_PROJ_BUNDLE": 1,
    "ILLUSIE_BLOWUP": 2,
    "ORD_IMPLIES_HW": 1,
    "MAIN_THEOREM": 1,
}


def _and(*vs: str) -> str:
    return _NAME[min(_RANK[v] for v in vs)]


def _or(*vs: str) -> str:
    return _NAME[max(_RANK[v] for v in vs)]


@dataclass
class CheckResult:
    ok: bool = True
    nodes: int = 0
    errors: list[str] = field(default_factory=list)

    def fail(self, path: str, msg: str):
        self.ok = False
        self.errors.append(f"{path}: {msg}")


def _expected(rule: str, vs: list[str]) -> str:
    if rule == "EKEDAHL_PRODUCT":
        return _or(_and(vs[0], vs[1]), _and(vs[2], vs[3]))
    if rule in ("ILLUSIE_PROJ_BUNDLE", "MAIN_THEOREM"):
        return vs[0]
    if rule in ("ILLUSIE_BLOWUP", "DOMINANT_TRANSFORM", "ORDINARY_BUILDING_SET"):
        return _and(*vs)
    if rule == "ORD_IMPLIES_HW":
        return "true" if vs[0] == "true" else "unknown"
    raise KeyError(rule)


def check_certificate(doc: dict) -> CheckResult:
    """Walk a certificate dict and report every inconsistency found."""
    res = CheckResult()
    if "certificate" in doc and "claim" not in doc:
        doc = doc["certificate"]

    def go(node: dict, path: str):
        res.nodes += 1
        try:
            claim, rule = node["claim"], node["rule"]
            verdict, prop = claim["verdict"], claim["property"]
        except (KeyError, TypeError):
            res.fail(path, "missing claim or rule")
            return
        if verdict not in _RANK:
            res.fail(path, f"bad verdict {verdict!r}")
            return
        premises = node.get("premises", [])
        if rule == "ATOM_FACT":
            rec = node.get("atom")
            if rec is None:
                res.fail(path, "ATOM_FACT without an atom record")
            elif rec.get(prop) != verdict:
                res.fail(path, f"leaf says {verdict} but atom {rec.get('name')} has {prop}={rec.get(prop)}")
            if premises:
                res.fail(path, "leaf with premises")
            return
        if rule in ("EMPTY_ORDINARY", "POINT_ORDINARY"):
            if verdict != "true" or prop != "ordinary":
                res.fail(path, f"{rule} must conclude ordinary = true")
            if premises:
                res.fail(path, "leaf with premises")
            return
        want = _PREMISE_COUNT.get(rule)
        if want is not None and len(premises) != want:
            res.fail(path, f"{rule} needs {want} premises, got {len(premises)}")
            return
        if rule not in _PREMISE_COUNT and rule not in ("DOMINANT_TRANSFORM", "ORDINARY_BUILDING_SET"):
            res.fail(path, f"unknown rule {rule!r}")
            return
        if not premises:
            res.fail(path, f"{rule} without premises")
            return
        props = [p.get("claim", {}).get("property") for p in premises]
        if rule == "EKEDAHL_PRODUCT":
            shape = ["ordinary", "hodge_witt", "ordinary", "hodge_witt"]
        else:
            shape = ["ordinary"] * len(premises)
        if props != shape:
            res.fail(path, f"{rule} premises have properties {props}, expected {shape}")
        expected_prop = "hodge_witt" if rule == "ORD_IMPLIES_HW" else "ordinary"
        if prop != expected_prop:
            res.fail(path, f"{rule} concludes {prop}, expected {expected_prop}")
        for i, p in enumerate(premises):
            go(p, f"{path}.{i}")
        vs = [p.get("claim", {}).get("verdict") for p in premises]
        if any(v not in _RANK for v in vs):
            return
        exp = _expected(rule, vs)
        if exp != verdict:
            res.fail(path, f"{rule} on {vs} gives {exp}, certificate says {verdict}")

    go(doc, "root")
    return res


__all__ = ["CheckResult", "check_certificate"]
