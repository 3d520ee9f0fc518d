"""Three-valued ordinarity certificates.

Every judgment is a node ``(claim, rule, premises)``.  Verdicts follow the
rules' truth tables under Kleene logic, so ``UNKNOWN`` propagates instead of
being guessed and the "only if" directions can certify non-ordinarity.

Rules:

==================== ===================================================
ATOM_FACT            leaf: a fact asserted on an atom
EMPTY_ORDINARY       leaf: the empty scheme is ordinary by convention
POINT_ORDINARY       leaf: a point is ordinary
ORD_IMPLIES_HW       ordinary implies Hodge-Witt
EKEDAHL_PRODUCT      X x Y ordinary  <=>  (Ord X and HW Y) or (Ord Y and HW X)
ILLUSIE_PROJ_BUNDLE  P(V) ordinary  <=>  base ordinary
ILLUSIE_BLOWUP       Bl_Z X ordinary  <=>  X and Z ordinary
DOMINANT_TRANSFORM   transform of Y ordinary  <=>  Y and Y & Z ordinary
ORDINARY_BUILDING_SET  ambient and all intersections of members ordinary
MAIN_THEOREM         X_G ordinary  <=>  G is an ordinary building set
==================== ===================================================
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .blowup import BlowupTrace, Locus, TransformCase, TraceError
from .lattice import EMPTY_MARK, BuildingSet
from .space import (
    TRUE,
    UNKNOWN,
    Atom,
    Blowup,
    Empty,
    Point,
    Product,
    ProjBundle,
    SpaceExpr,
    Tristate,
    render,
)

ORDINARY = "ordinary"
HODGE_WITT = "hodge_witt"


class Rule(enum.Enum):
    ATOM_FACT = "ATOM_FACT"
    EMPTY_ORDINARY = "EMPTY_ORDINARY"
    POINT_ORDINARY = "POINT_ORDINARY"
    EKEDAHL_PRODUCT = "EKEDAHL_PRODUCT"
    ILLUSIE_PROJ_BUNDLE = "ILLUSIE_PROJ_BUNDLE"
    ILLUSIE_BLOWUP = "ILLUSIE_BLOWUP"
    DOMINANT_TRANSFORM = "DOMINANT_TRANSFORM"
    ORD_IMPLIES_HW = "ORD_IMPLIES_HW"
    ORDINARY_BUILDING_SET = "ORDINARY_BUILDING_SET"
    MAIN_THEOREM = "MAIN_THEOREM"

    def __str__(self):
        return self.value


LEAF_RULES = frozenset({Rule.ATOM_FACT, Rule.EMPTY_ORDINARY, Rule.POINT_ORDINARY})


@dataclass(frozen=True, eq=False)
class Certificate:
    subject: str
    property: str
    verdict: Tristate
    rule: Rule
    premises: tuple[Certificate, ...] = ()
    atom: Atom | None = None
    detail: str | None = None

    @property
    def blocked_by(self) -> frozenset[tuple[str, str]]:
        return blocking_leaves(self)

    def nodes(self) -> Iterable[Certificate]:
        """Distinct nodes of the derivation DAG, each once."""
        seen = set()
        stack = [self]
        while stack:
            c = stack.pop()
            if id(c) in seen:
                continue
            seen.add(id(c))
            yield c
            stack.extend(c.premises)


# -- rule semantics ---------------------------------------------------------


def evaluate(rule: Rule, premises: list[Tristate], detail: str | None = None) -> Tristate:
    """Truth table of each non-leaf rule on its premise verdicts."""
    if rule is Rule.EKEDAHL_PRODUCT:
        if len(premises) != 4:
            raise ValueError("EKEDAHL_PRODUCT takes (Ord X, HW Y, Ord Y, HW X)")
        ox, hy, oy, hx = premises
        return (ox & hy) | (oy & hx)
    if rule is Rule.ILLUSIE_PROJ_BUNDLE or rule is Rule.MAIN_THEOREM:
        if len(premises) != 1:
            raise ValueError(f"{rule} takes one premise")
        return premises[0]
    if rule is Rule.ILLUSIE_BLOWUP:
        if len(premises) != 2:
            raise ValueError("ILLUSIE_BLOWUP takes (Ord X, Ord Z)")
        return premises[0] & premises[1]
    if rule is Rule.ORD_IMPLIES_HW:
        if len(premises) != 1:
            raise ValueError("ORD_IMPLIES_HW takes one premise")
        return TRUE if premises[0] is TRUE else UNKNOWN
    if rule is Rule.DOMINANT_TRANSFORM or rule is Rule.ORDINARY_BUILDING_SET:
        if not premises:
            raise ValueError(f"{rule} needs premises")
        return Tristate.all(premises)
    raise ValueError(f"{rule} is a leaf rule")


def _node(subject, prop, rule, premises, detail=None) -> Certificate:
    premises = tuple(premises)
    v = evaluate(rule, [p.verdict for p in premises], detail)
    return Certificate(subject, prop, v, rule, premises, None, detail)


# -- spaces -----------------------------------------------------------------


@lru_cache(maxsize=None)
def certify_space(s: SpaceExpr) -> Certificate:
    """Ordinarity of a space expression, derived structurally."""
    subject = render(s)
    if isinstance(s, Empty):
        return Certificate(subject, ORDINARY, TRUE, Rule.EMPTY_ORDINARY)
    if isinstance(s, Point):
        return Certificate(subject, ORDINARY, TRUE, Rule.POINT_ORDINARY)
    if isinstance(s, Atom):
        return Certificate(subject, ORDINARY, s.facts.ordinary, Rule.ATOM_FACT, atom=s)
    if isinstance(s, Product):
        premises = [certify_space(s.left), certify_hodge_witt(s.right), certify_space(s.right), certify_hodge_witt(s.left)]
        return _node(subject, ORDINARY, Rule.EKEDAHL_PRODUCT, premises)
    if isinstance(s, ProjBundle):
        return _node(subject, ORDINARY, Rule.ILLUSIE_PROJ_BUNDLE, [certify_space(s.base)])
    if isinstance(s, Blowup):
        detail = "divisorial" if s.codim == 1 else None
        return _node(subject, ORDINARY, Rule.ILLUSIE_BLOWUP, [certify_space(s.ambient), certify_space(s.center)], detail)
    raise TypeError(f"not a space expression: {s!r}")


@lru_cache(maxsize=None)
def certify_hodge_witt(s: SpaceExpr) -> Certificate:
    """Hodge-Witt is only ever asserted on atoms or forced by ordinarity."""
    if isinstance(s, Atom) and not s.facts.hw_from_ordinary:
        return Certificate(render(s), HODGE_WITT, s.facts.hodge_witt, Rule.ATOM_FACT, atom=s)
    return _node(render(s), HODGE_WITT, Rule.ORD_IMPLIES_HW, [certify_space(s)])


# -- building sets and traces -----------------------------------------------


def certify_building_set(bs: BuildingSet) -> Certificate:
    arr = bs.arrangement
    premises = [certify_space(arr.ambient)]
    premises += [certify_space(arr[eid].space) for eid in bs.closure()]
    if bs.has_empty_intersections():
        premises.append(certify_space(Empty()))
    subject = "building set {" + ", ".join(sorted(bs.members)) + "} of " + render(arr.ambient)
    return _node(subject, ORDINARY, Rule.ORDINARY_BUILDING_SET, premises)


def certify_wonderful(trace: BlowupTrace | BuildingSet) -> Certificate:
    """Theorem-level verdict: read off the building set, never the tower."""
    bs = trace.building_set if isinstance(trace, BlowupTrace) else trace
    inner = certify_building_set(bs)
    return _node("wonderful compactification X_G", ORDINARY, Rule.MAIN_THEOREM, [inner])


def certify_trace(trace: BlowupTrace) -> Certificate:
    """Proof-level verdict: replay the tower one blowup at a time."""
    stage0 = trace.stages[0]
    certs = {eid: certify_space(e.space) for eid, e in stage0.elements.items()}
    ambient = certify_space(stage0.ambient)
    empty_leaf = certify_space(Empty())
    for prev, stage in zip(trace.stages, trace.stages[1:]):
        c = stage.center
        if c is None:
            raise TraceError(f"stage {stage.index} has no center")
        detail = "divisorial" if prev.ambient.dim - prev.elements[c].dim == 1 else None
        final = stage.index == len(trace)
        subject = f"X_{stage.index}{' (final)' if final else ''} = Bl(X_{prev.index}, {c}^({prev.index}))"
        ambient = _node(subject, ORDINARY, Rule.ILLUSIE_BLOWUP, [ambient, certs[c]], detail)
        new = {}
        for eid, el in stage.elements.items():
            subject = f"{eid}^({stage.index})"
            case = el.case
            if case in (TransformCase.EQUAL, TransformCase.PULLBACK):
                premises = [certs[eid]]
            else:
                m = prev.meet_entry(eid, c)
                if m == EMPTY_MARK:
                    premises = [certs[eid], empty_leaf]
                elif isinstance(m, Locus):
                    premises = [certs[eid], certify_space(m.space)]
                else:
                    premises = [certs[eid], certs[m]]
            new[eid] = _node(subject, ORDINARY, Rule.DOMINANT_TRANSFORM, premises, str(case))
        certs = new
    return ambient


# -- inspection -------------------------------------------------------------


def blocking_leaves(cert: Certificate) -> frozenset[tuple[str, str]]:
    """Leaves holding an UNKNOWN verdict that an UNKNOWN conclusion depends on.

    Only UNKNOWN premises are followed: a TRUE or FALSE subtree is settled and
    cannot be what blocks the conclusion.
    """
    if cert.verdict is not UNKNOWN:
        return frozenset()
    out = set()
    seen = set()
    stack = [cert]
    while stack:
        c = stack.pop()
        if id(c) in seen:
            continue
        seen.add(id(c))
        if c.rule in LEAF_RULES:
            if c.verdict is UNKNOWN:
                out.add((c.atom.name if c.atom is not None else c.subject, c.property))
            continue
        stack.extend(p for p in c.premises if p.verdict is UNKNOWN)
    return frozenset(out)


def to_json(cert: Certificate) -> dict:
    """Nested ``{claim, rule, premises}`` form (shared subtrees are repeated)."""
    memo: dict[int, dict] = {}

    def go(c: Certificate) -> dict:
        if id(c) in memo:
            return memo[id(c)]
        d = {
            "claim": {"subject": c.subject, "property": c.property, "verdict": str(c.verdict)},
            "rule": c.rule.value,
            "premises": [go(p) for p in c.premises],
        }
        if c.atom is not None:
            d["atom"] = {
                "name": c.atom.name,
                "dim": c.atom.dim,
                "ordinary": str(c.atom.facts.ordinary),
                "hodge_witt": str(c.atom.facts.hodge_witt),
            }
        if c.detail is not None:
            d["detail"] = c.detail
        memo[id(c)] = d
        return d

    return go(cert)


def tree_size(cert: Certificate) -> int:
    """Number of nodes once shared subtrees are written out in full."""

    @lru_cache(maxsize=None)
    def size(i):
        c = by_id[i]
        return 1 + sum(size(id(p)) for p in c.premises)

    by_id = {id(c): c for c in cert.nodes()}
    return size(id(cert))


_CONVENTIONS = {
    Rule.EMPTY_ORDINARY: "the empty scheme is ordinary by convention",
    Rule.POINT_ORDINARY: "a point is ordinary",
}


def explain(cert: Certificate, format: str = "text", max_depth: int | None = None) -> str:
    if format == "json":
        return json.dumps(to_json(cert), sort_keys=True, ensure_ascii=False, indent=2)
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    lines: list[str] = []

    def go(c: Certificate, depth: int):
        pad = "  " * depth
        what = f"{c.property}({c.subject}) = {c.verdict}"
        tail = f"  [{c.rule}"
        if c.detail:
            tail += f": {c.detail}"
        tail += "]"
        if c.rule is Rule.ATOM_FACT:
            tail += f" asserted on atom {c.atom.name}"
        elif c.rule in _CONVENTIONS:
            tail += f" {_CONVENTIONS[c.rule]}"
        lines.append(pad + what + tail)
        if max_depth is not None and depth >= max_depth and c.premises:
            lines.append(pad + "  ...")
            return
        for p in c.premises:
            go(p, depth + 1)

    go(cert, 0)
    blocked = blocking_leaves(cert)
    if blocked:
        lines.append("blocked by: " + ", ".join(f"{name}:{prop}" for name, prop in sorted(blocked)))
    return "\n".join(lines)


__all__ = [
    "Certificate",
    "Rule",
    "ORDINARY",
    "HODGE_WITT",
    "evaluate",
    "certify_space",
    "certify_hodge_witt",
    "certify_building_set",
    "certify_wonderful",
    "certify_trace",
    "blocking_leaves",
    "to_json",
    "tree_size",
    "explain",
]
