"""Command-line front end.

    wonderful build    fm --base P2 --n 3          # blowup trace (JSON)
    wonderful validate --input arrangement.json    # building-set report
    wonderful certify  fm --base X --n 2 --assume X:ordinary=false
    wonderful betti    kapranov --n 5
    wonderful explain  certificate.json

``certify`` exits 0, 3 or 4 for a True, False or Unknown verdict.  Exit 1 is
malformed input, exit 2 an unsupported parameter range.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import schema
from .betti import InsufficientData, poincare
from .blowup import BlowupTrace, InvalidBuildingSet, Locus, Stage, StageElement, TraceError, wonderful
from .certify import blocking_leaves, certify_space, certify_trace, certify_wonderful, explain, to_json
from .checker import check_certificate
from .constructions import (
    Center,
    TowerDescription,
    TowerError,
    TowerStep,
    UnsupportedRange,
    fm_building_set,
    kapranov_m0n,
    keel_tower,
    tdn_tower,
    ulyanov_building_set,
)
from .lattice import ArrangementError, BuildingSet, ElementDescriptor, is_building_set
from .space import FALSE, TRUE, UNKNOWN, Atom, SpaceError, Tristate, atom, atoms, projective_space, render, substitute, with_facts

EXIT_OK, EXIT_INPUT, EXIT_RANGE = 0, 1, 2
VERDICT_EXIT = {TRUE: 0, FALSE: 3, UNKNOWN: 4}

GENERATORS = ("fm", "ulyanov", "kapranov", "keel", "tdn")
_FLAGS = {"ordinary": "ordinary", "hodge_witt": "hodge_witt", "hodge-witt": "hodge_witt", "hw": "hodge_witt"}


class UsageError(Exception):
    """Malformed input: exit 1."""


@dataclass
class Assumption:
    atom: str
    flag: str
    value: Tristate


@dataclass
class RunConfig:
    command: str
    instance: str | None = None
    params: dict = field(default_factory=dict)
    input: str | None = None
    assumptions: list[Assumption] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    with_trace: bool = False
    max_depth: int | None = None
    check: bool = False


def parse_assumption(text: str) -> Assumption:
    m = re.fullmatch(r"\s*([^:=\s]+)\s*:\s*([\w-]+)\s*=\s*(\w+)\s*", text)
    if not m:
        raise UsageError(f"cannot parse assumption {text!r}; expected ATOM:FLAG=VALUE")
    name, flag, value = m.groups()
    if flag.lower() not in _FLAGS:
        raise UsageError(f"unknown flag {flag!r} in {text!r}; use ordinary or hodge_witt")
    try:
        v = Tristate.coerce(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return Assumption(name, _FLAGS[flag.lower()], v)


# -- instances --------------------------------------------------------------


def _base_space(name: str, dim: int | None, poly: str | None):
    m = re.fullmatch(r"P(\d+)", name)
    if m:
        d = int(m.group(1))
        if dim is not None and dim != d:
            raise UsageError(f"--base-dim {dim} contradicts {name}")
        return projective_space(d)
    coeffs = None
    if poly is not None:
        try:
            coeffs = [int(c) for c in poly.split(",")]
        except ValueError:
            raise UsageError(f"--base-poincare must be comma-separated integers, got {poly!r}") from None
    try:
        return atom(name, 1 if dim is None else dim, poincare=coeffs)
    except SpaceError as exc:
        raise UsageError(str(exc)) from None


def _need(params: dict, *keys):
    for k in keys:
        if params.get(k) is None:
            raise UsageError(f"missing --{k}")


def build_instance(cfg: RunConfig):
    """A BuildingSet, BlowupTrace or TowerDescription for the configured instance."""
    if cfg.input is not None:
        if cfg.instance is not None:
            raise UsageError("give either a generator name or --input, not both")
        try:
            with open(cfg.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.input}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{cfg.input} is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise UsageError(f"{cfg.input}: top level must be an object")
        return schema.load(doc)
    p = cfg.params
    if cfg.instance in ("fm", "ulyanov"):
        _need(p, "n")
        x = _base_space(p.get("base") or "P2", p.get("base_dim"), p.get("base_poincare"))
        gen = fm_building_set if cfg.instance == "fm" else ulyanov_building_set
        return gen(x, p["n"])[1]
    if cfg.instance == "kapranov":
        _need(p, "n")
        return kapranov_m0n(p["n"])[1]
    if cfg.instance == "keel":
        _need(p, "n")
        return keel_tower(p["n"])
    if cfg.instance == "tdn":
        _need(p, "d", "n")
        return tdn_tower(p["d"], p["n"])
    raise UsageError("no instance given: name a generator or pass --input FILE")


def _all_atoms(obj) -> dict[str, Atom]:
    found: dict[str, Atom] = {}
    for s in _spaces(obj):
        found.update(atoms(s))
    return found


def _spaces(obj):
    if isinstance(obj, BuildingSet):
        yield obj.ambient
        for e in obj.arrangement.elements.values():
            yield e.space
    elif isinstance(obj, BlowupTrace):
        yield from _spaces(obj.building_set)
        for st in obj.stages:
            yield st.ambient
            for e in st.elements.values():
                yield e.space
            for m in st.meet.values():
                if isinstance(m, Locus):
                    yield m.space
    elif isinstance(obj, TowerDescription):
        yield obj.base
        for step in obj.steps:
            for c in step.centers:
                yield c.space
    else:
        yield obj


def apply_assumptions(obj, assumptions: list[Assumption]):
    """Override atom facts everywhere in ``obj``; normalization runs afterwards."""
    if not assumptions:
        return obj
    known = _all_atoms(obj)
    pending: dict[str, dict] = {}
    for a in assumptions:
        if a.atom not in known:
            names = ", ".join(sorted(known)) or "none"
            raise UsageError(f"assumption names unknown atom {a.atom!r} (atoms: {names})")
        pending.setdefault(a.atom, {})[a.flag] = a.value
    repl = {name: with_facts(known[name], **flags) for name, flags in pending.items()}

    def sub(s):
        return substitute(s, repl)

    if isinstance(obj, BuildingSet):
        arr = obj.arrangement
        elements = {k: ElementDescriptor(e.id, e.dim, sub(e.space), e.origin) for k, e in arr.elements.items()}
        new = type(arr)(sub(arr.ambient), elements, arr.meet_table)
        return BuildingSet(new, obj.members)
    if isinstance(obj, BlowupTrace):
        stages = []
        for st in obj.stages:
            elements = {k: StageElement(e.id, e.case, sub(e.space), e.origin_chain) for k, e in st.elements.items()}
            meet = {k: Locus(sub(m.space)) if isinstance(m, Locus) else m for k, m in st.meet.items()}
            stages.append(Stage(st.index, st.center, sub(st.ambient), elements, meet, st.remaining))
        return BlowupTrace(apply_assumptions(obj.building_set, assumptions), obj.order, tuple(stages))
    if isinstance(obj, TowerDescription):
        steps = tuple(
            TowerStep(s.label, tuple(Center(c.label, sub(c.space), c.codim) for c in s.centers)) for s in obj.steps
        )
        return TowerDescription(obj.name, sub(obj.base), steps)
    return sub(obj)


def _final_space(obj):
    if isinstance(obj, BuildingSet):
        return wonderful(obj.ambient, obj).final_space
    if isinstance(obj, BlowupTrace):
        return obj.final_space
    if isinstance(obj, TowerDescription):
        return obj.space()
    return obj


# -- commands ---------------------------------------------------------------


def cmd_build(cfg: RunConfig, obj) -> tuple[int, str]:
    if isinstance(obj, BuildingSet):
        obj = wonderful(obj.ambient, obj)
    if isinstance(obj, BlowupTrace):
        if cfg.format == "json":
            return EXIT_OK, schema.dumps(schema.trace_to_json(obj))
        lines = [f"X_0 = {render(obj.initial.ambient)}  (dim {obj.initial.ambient.dim})"]
        for st in obj.steps:
            cases = {}
            for e in st.elements.values():
                cases[str(e.case)] = cases.get(str(e.case), 0) + 1
            summary = ", ".join(f"{k} {v}" for k, v in sorted(cases.items()))
            lines.append(f"X_{st.index}: blow up {st.center}  [{summary}]")
        lines.append(f"final: {render(obj.final_space)}")
        return EXIT_OK, "\n".join(lines) + "\n"
    if isinstance(obj, TowerDescription):
        if cfg.format == "json":
            return EXIT_OK, schema.dumps(schema.tower_to_json(obj))
        lines = [f"{obj.name}: base {render(obj.base)}  (dim {obj.dim})"]
        for step in obj.steps:
            lines.append(f"{step.label}: " + ", ".join(f"{c.label} (codim {c.codim})" for c in step.centers))
        lines.append(f"final: {render(obj.space())}")
        return EXIT_OK, "\n".join(lines) + "\n"
    raise UsageError("build needs an arrangement, trace or tower")


def cmd_validate(cfg: RunConfig, obj) -> tuple[int, str]:
    if isinstance(obj, BlowupTrace):
        obj = obj.building_set
    if not isinstance(obj, BuildingSet):
        raise UsageError("validate needs an arrangement with a building set")
    report = is_building_set(obj.arrangement, obj.members)
    if cfg.format == "json":
        return EXIT_OK, schema.dumps(schema.report_to_json(report))
    lines = [f"valid: {str(report.valid).lower()}  (transversality: {report.transversality})"]
    lines += [f"  {v.element}: {v.check}: {v.detail}" for v in report.violations]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_certify(cfg: RunConfig, obj) -> tuple[int, str]:
    if isinstance(obj, BuildingSet):
        obj = wonderful(obj.ambient, obj)
    doc = {"schema_version": schema.SCHEMA_VERSION, "kind": "certificate"}
    if isinstance(obj, BlowupTrace):
        main = certify_wonderful(obj)
        tr = certify_trace(obj)
        doc["route"] = "wonderful"
        doc["trace_verdict"] = str(tr.verdict)
        doc["trace_blocked_by"] = [list(x) for x in sorted(blocking_leaves(tr))]
        if cfg.with_trace:
            doc["trace_certificate"] = to_json(tr)
        if tr.verdict is not main.verdict:
            raise TraceError(f"trace verdict {tr.verdict} disagrees with building-set verdict {main.verdict}")
    else:
        if isinstance(obj, TowerDescription):
            doc["route"] = "tower"
        else:
            doc["route"] = "space"
        main = certify_space(_final_space(obj))
    doc["verdict"] = str(main.verdict)
    doc["blocked_by"] = [list(x) for x in sorted(blocking_leaves(main))]
    doc["certificate"] = to_json(main)
    code = VERDICT_EXIT[main.verdict]
    if cfg.format == "json":
        return code, schema.dumps(doc)
    text = explain(main, max_depth=cfg.max_depth)
    if "trace_verdict" in doc:
        text += f"\ntrace verdict: {doc['trace_verdict']}"
    return code, text + "\n"


def cmd_betti(cfg: RunConfig, obj) -> tuple[int, str]:
    s = _final_space(obj)
    p = poincare(s)
    if cfg.format == "json":
        doc = {
            "schema_version": schema.SCHEMA_VERSION,
            "kind": "betti",
            "space": render(s),
            "dim": s.dim,
            "poincare": list(p.coeffs),
            "text": str(p),
            "palindromic": p.is_palindromic(2 * s.dim),
        }
        return EXIT_OK, schema.dumps(doc)
    return EXIT_OK, f"{p}\n"


def cmd_explain(cfg: RunConfig, path: str) -> tuple[int, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: top level must be an object")
    if "schema_version" in doc:
        schema.check_version(doc)
    body = doc.get("certificate", doc)
    cert = schema.certificate_from_json(body)
    out = explain(cert, format=cfg.format, max_depth=cfg.max_depth) + "\n"
    code = EXIT_OK
    if cfg.check:
        res = check_certificate(body)
        out += f"check: {'ok' if res.ok else 'FAILED'} ({res.nodes} nodes)\n"
        out += "".join(f"  {e}\n" for e in res.errors)
        code = EXIT_OK if res.ok else EXIT_INPUT
    return code, out


# -- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wonderful", description="Wonderful compactifications and their ordinarity.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(p, default_format):
        p.add_argument("instance", nargs="?", choices=GENERATORS, help="built-in generator")
        p.add_argument("--input", help="JSON file: building_set, trace, tower or space")
        p.add_argument("--n", type=int, help="number of points / M_0,n index")
        p.add_argument("--d", type=int, help="dimension d for tdn")
        p.add_argument("--base", help="base variety for fm/ulyanov: P<d> or an atom name (default P2)")
        p.add_argument("--base-dim", type=int, help="dimension of an atom base (default 1)")
        p.add_argument("--base-poincare", help="Betti numbers of an atom base, e.g. 1,0,1")
        p.add_argument("--assume", action="append", default=[], metavar="ATOM:FLAG=VALUE")
        p.add_argument("--format", choices=("json", "text"), default=default_format)
        p.add_argument("--output", "-o", help="write here instead of stdout")

    instance_args(sub.add_parser("build", help="run the blowup tower and write the trace"), "json")
    instance_args(sub.add_parser("validate", help="check the building-set axioms"), "json")
    p = sub.add_parser("certify", help="certify ordinarity (exit 0/3/4 for True/False/Unknown)")
    instance_args(p, "json")
    p.add_argument("--with-trace", action="store_true", help="include the stage-by-stage certificate")
    p.add_argument("--max-depth", type=int, help="truncate the text rendering")
    instance_args(sub.add_parser("betti", help="Poincaré polynomial of the result"), "text")
    p = sub.add_parser("explain", help="render a certificate file")
    p.add_argument("path", nargs="?")
    p.add_argument("--input")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--max-depth", type=int)
    p.add_argument("--check", action="store_true", help="re-check every rule application")
    p.add_argument("--output", "-o")
    return parser


def config_from_args(args) -> RunConfig:
    if args.command == "explain":
        path = args.path or args.input
        if path is None:
            raise UsageError("explain needs a certificate file")
        return RunConfig("explain", input=path, output=args.output, format=args.format,
                         max_depth=args.max_depth, check=args.check)
    params = {"n": args.n, "d": args.d, "base": args.base, "base_dim": args.base_dim,
              "base_poincare": args.base_poincare}
    return RunConfig(
        args.command,
        instance=args.instance,
        params=params,
        input=args.input,
        assumptions=[parse_assumption(a) for a in args.assume],
        output=args.output,
        format=args.format,
        with_trace=getattr(args, "with_trace", False),
        max_depth=getattr(args, "max_depth", None),
    )


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns ``(exit status, output text)``."""
    if cfg.command == "explain":
        return cmd_explain(cfg, cfg.input)
    obj = apply_assumptions(build_instance(cfg), cfg.assumptions)
    handler = {"build": cmd_build, "validate": cmd_validate, "certify": cmd_certify, "betti": cmd_betti}
    return handler[cfg.command](cfg, obj)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        cfg = config_from_args(args)
        code, out = run(cfg)
    except UnsupportedRange as exc:
        print(f"wonderful: unsupported range: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except InsufficientData as exc:
        print(f"wonderful: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, schema.SchemaError, ArrangementError, SpaceError, TraceError, TowerError, ValueError) as exc:
        if isinstance(exc, InvalidBuildingSet):
            print(f"wonderful: {exc}", file=sys.stderr)
        else:
            print(f"wonderful: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
