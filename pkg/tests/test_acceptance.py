"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line.  Run with
``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from oracles import bell, brute_fm_closure_size, ekedahl_oracle, m0n_poincare  # noqa: E402
from wonderful import (  # noqa: E402
    affine_polydiagonal_building_set,
    fm_building_set,
    kapranov_m0n,
    keel_tower,
    tdn_tower,
    ulyanov_building_set,
    wonderful,
)
from wonderful.betti import poincare  # noqa: E402
from wonderful.blowup import Locus, StageElement, TransformCase, dominant_transform  # noqa: E402
from wonderful.certify import Rule, blocking_leaves, certify_trace, certify_wonderful, evaluate  # noqa: E402
from wonderful.constructions import polydiagonal_building_set  # noqa: E402
from wonderful.lattice import EMPTY_MARK, is_building_set, poison  # noqa: E402
from wonderful.polynomial import PoincarePolynomial  # noqa: E402
from wonderful.space import (  # noqa: E402
    FALSE,
    POINT,
    TRUE,
    UNKNOWN,
    Blowup,
    ProjBundle,
    atom,
    projective_space,
)

T3 = (FALSE, UNKNOWN, TRUE)


# lines collected here are printed by the terminal-summary hook in conftest.py
RESULTS: list[str] = []


def _report(number: int, title: str, body):
    try:
        detail = body()
    except BaseException as exc:
        RESULTS.append(f"criterion {number}: FAIL  {title}  ({type(exc).__name__}: {exc})")
        raise
    extra = f"  ({detail})" if detail else ""
    RESULTS.append(f"criterion {number}: PASS  {title}{extra}")


# 1 ---------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(20240611)
    count, tally = 0, {}
    start = time.perf_counter()
    while count < 240:
        gen = rng.choice([fm_building_set, ulyanov_building_set])
        x = atom("X", rng.randint(1, 3), rng.choice(T3), rng.choice(T3))
        amb, bs = gen(x, rng.randint(2, 4))
        ids = bs.closure()
        for eid in rng.sample(ids, rng.randint(0, min(2, len(ids)))):
            bs = poison(bs, eid, rng.choice(T3), rng.choice(T3))
        tr = wonderful(amb, bs)
        a, b = certify_trace(tr), certify_wonderful(tr)
        assert a.verdict is b.verdict, f"instance {count}: {a.verdict} vs {b.verdict}"
        assert blocking_leaves(a) == blocking_leaves(b), f"instance {count}: blocking sets differ"
        tally[str(a.verdict)] = tally.get(str(a.verdict), 0) + 1
        count += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    assert set(tally) == {"true", "false", "unknown"}
    return f"{count} instances in {elapsed:.2f}s, verdicts {dict(sorted(tally.items()))}"


def test_criterion_1_trace_matches_theorem():
    _report(1, "trace and building-set verdicts agree on random FM/Ulyanov instances", criterion_1)


# 2 ---------------------------------------------------------------------------


def criterion_2():
    bases = [projective_space(d) for d in (1, 2, 3)] + [atom("X", d, ordinary=True) for d in (1, 2, 3)]
    checked = 0
    for x in bases:
        for n in (2, 3, 4):
            amb, bs = fm_building_set(x, n)
            tr = wonderful(amb, bs)
            if certify_wonderful(tr).verdict is not TRUE:
                continue
            for eid in sorted(bs.arrangement.elements):
                for flag in (FALSE, UNKNOWN):
                    bad = wonderful(amb, poison(bs, eid, flag))
                    assert certify_wonderful(bad).verdict is flag, (x, n, eid, flag)
                    assert certify_trace(bad).verdict is flag, (x, n, eid, flag)
                    checked += 1
    assert checked > 0
    return f"{checked} single-element flips"


def test_criterion_2_poisoning_flips_verdict():
    _report(2, "poisoning any FM element flips True to False / Unknown", criterion_2)


# 3 ---------------------------------------------------------------------------


def criterion_3():
    for combo in itertools.product(T3, repeat=4):
        got = evaluate(Rule.EKEDAHL_PRODUCT, list(combo))
        assert got.value == ekedahl_oracle(*(v.value for v in combo)), combo
    for a, b in itertools.product(T3, repeat=2):
        want = FALSE if FALSE in (a, b) else UNKNOWN if UNKNOWN in (a, b) else TRUE
        assert evaluate(Rule.ILLUSIE_BLOWUP, [a, b]) is want, (a, b)
    for a, b in itertools.product(T3, repeat=2):
        # the bundle rule has one premise; the second coordinate must not matter
        assert evaluate(Rule.ILLUSIE_PROJ_BUNDLE, [a]) is a, (a, b)
    return "81 + 9 + 9 combinations"


def test_criterion_3_truth_tables():
    _report(3, "EKEDAHL_PRODUCT, ILLUSIE_BLOWUP and ILLUSIE_PROJ_BUNDLE truth tables", criterion_3)


# 4 ---------------------------------------------------------------------------


def criterion_4():
    p1, p2, p3 = (projective_space(d) for d in (1, 2, 3))

    def el(eid, space):
        return StageElement(eid, None, space, ((0, eid),))

    plane, line, pt, skew = el("H", p2), el("L", p1), el("p", POINT), el("M", p1)
    elems = {e.id: e for e in (plane, line, pt, skew)}
    codim = p3.dim - line.dim

    eq = dominant_transform(line, line, p3, "L", elems)
    assert eq.case is TransformCase.EQUAL and eq.space == ProjBundle(p1, codim)
    assert eq.dim == p3.dim - 1

    pb = dominant_transform(pt, line, p3, "p", elems)
    assert pb.case is TransformCase.PULLBACK and pb.space == ProjBundle(POINT, codim)
    assert pb.dim == pt.dim + codim - 1

    dj = dominant_transform(skew, line, p3, EMPTY_MARK, elems)
    assert dj.case is TransformCase.DISJOINT and dj.space == skew.space and dj.dim == skew.dim

    st = dominant_transform(plane, line, p3, "p", elems)
    assert st.case is TransformCase.STRICT and st.space == Blowup(p2, POINT, 2) and st.dim == plane.dim

    # the same cases through the iterated driver: FM two points of P2
    amb, bs = fm_building_set(p2, 2)
    first = wonderful(amb, bs).steps[0]
    e = first.elements["D12"]
    assert e.case is TransformCase.EQUAL and e.dim == amb.dim - 1
    loc = dominant_transform(plane, line, p3, Locus(POINT), elems)
    assert loc.case is TransformCase.STRICT
    return "Equal, Pullback, Disjoint, Strict"


def test_criterion_4_dominant_transform_cases():
    _report(4, "dominant-transform cases and dimensions on hand-built fixtures", criterion_4)


# 5 ---------------------------------------------------------------------------


def criterion_5():
    k5 = poincare(wonderful(*kapranov_m0n(5)).final_space)
    k6 = poincare(wonderful(*kapranov_m0n(6)).final_space)
    assert k5 == (1, 0, 5, 0, 1) and list(k5) == m0n_poincare(5)
    assert k6 == (1, 0, 16, 0, 16, 0, 1) and list(k6) == m0n_poincare(6)
    assert poincare(keel_tower(4).space()) == k5
    assert poincare(keel_tower(5).space()) == k6
    p2 = projective_space(2)
    x2 = poincare(wonderful(*fm_building_set(p2, 2)).final_space)
    assert x2 == (1, 0, 3, 0, 4, 0, 3, 0, 1)
    for d in range(1, 6):
        assert poincare(tdn_tower(d, 2).space()) == PoincarePolynomial.projective_space(d - 1)
    return "Kapranov 5/6, Keel 4/5, X[2] over P2, T_{d,2} for d <= 5"


def test_criterion_5_betti_cross_checks():
    _report(5, "Betti cross-checks", criterion_5)


# 6 ---------------------------------------------------------------------------


def criterion_6():
    sizes = []
    for n in (2, 3, 4, 5):
        _, bs = fm_building_set(projective_space(1), n)
        size = len(bs.closure())
        assert size == bell(n) - 1 == brute_fm_closure_size(n), n
        sizes.append(size)
    assert sizes == [1, 4, 14, 51]
    return "closure sizes 1, 4, 14, 51"


def test_criterion_6_closure_sizes():
    _report(6, "FM closure sizes equal Bell(n) - 1", criterion_6)


# 7 ---------------------------------------------------------------------------


def criterion_7():
    for x in (projective_space(1), atom("X", 2)):
        for gen in (fm_building_set, ulyanov_building_set):
            for n in (2, 3, 4, 5):
                _, bs = gen(x, n)
                report = is_building_set(bs.arrangement, bs.members)
                assert report.valid, (gen.__name__, n, report.violations)
    _, bs = polydiagonal_building_set(atom("X", 1), 4, [[(1, 2, 3)], [(1, 2, 4)]])
    report = is_building_set(bs.arrangement, bs.members)
    assert not report.valid
    assert [(v.element, v.check) for v in report.violations] == [("D1234", "transversality")]
    return "FM/Ulyanov n <= 5 valid; {D123, D124} in X^4 fails at D1234"


def test_criterion_7_building_set_validation():
    _report(7, "building-set validation", criterion_7)


# 8 ---------------------------------------------------------------------------


def _check_palindromic(s, where):
    p = poincare(s)
    assert p.is_palindromic(2 * s.dim), f"{where}: {p} is not palindromic of degree {2 * s.dim}"


def criterion_8():
    count = 0
    instances = []
    for d in (1, 2, 3):
        for n in (2, 3, 4):
            instances.append((f"FM P{d} n={n}", fm_building_set(projective_space(d), n)))
            instances.append((f"Ulyanov P{d} n={n}", ulyanov_building_set(projective_space(d), n)))
    instances += [(f"Kapranov n={n}", kapranov_m0n(n)) for n in (5, 6)]
    instances += [(f"affine d={d} n={n}", affine_polydiagonal_building_set(d, n)) for d in (1, 2, 3) for n in (3, 4)]
    for name, (amb, bs) in instances:
        tr = wonderful(amb, bs)
        for st in tr.stages:
            _check_palindromic(st.ambient, f"{name} X_{st.index}")
            for e in st.elements.values():
                _check_palindromic(e.space, f"{name} stage {st.index} {e.id}")
                count += 1
            for m in st.meet.values():
                if isinstance(m, Locus):
                    _check_palindromic(m.space, f"{name} stage {st.index} locus")
                    count += 1
            count += 1
    for n in (4, 5, 6):
        _check_palindromic(keel_tower(n).space(), f"Keel n={n}")
        count += 1
    for d in (1, 2, 3):
        for n in (2, 3, 4, 5):
            _check_palindromic(tdn_tower(d, n).space(), f"T_{d},{n}")
            count += 1
    return f"{count} polynomials"


def test_criterion_8_palindromicity():
    _report(8, "Poincare polynomials of generated spaces are palindromic", criterion_8)


# 9 ---------------------------------------------------------------------------

CLI_EXAMPLES = [
    ["certify", "fm", "--base", "P2", "--n", "2"],
    ["certify", "fm", "--base", "X", "--n", "2", "--assume", "X:ordinary=false"],
    ["betti", "kapranov", "--n", "5"],
    ["betti", "kapranov", "--n", "5", "--format", "json"],
    ["build", "fm", "--base", "P2", "--n", "3"],
    ["certify", "ulyanov", "--base", "X", "--n", "3", "--with-trace"],
]


def _cli(argv, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    proc = subprocess.run([sys.executable, "-m", "wonderful", *argv], capture_output=True, env=env)
    return proc.returncode, proc.stdout


def criterion_9():
    expected_codes = [0, 3, 0, 0, 0, 4]
    for argv, want in zip(CLI_EXAMPLES, expected_codes):
        code1, out1 = _cli(argv, 1)
        code2, out2 = _cli(argv, 2)
        assert code1 == code2 == want, (argv, code1, code2)
        assert out1 == out2, f"output of {' '.join(argv)} differs between runs"
        assert out1
    return f"{len(CLI_EXAMPLES)} commands, two runs each under different hash seeds"


def test_criterion_9_cli_determinism():
    _report(9, "CLI output is byte-identical across runs", criterion_9)


CRITERIA = [
    (1, criterion_1),
    (2, criterion_2),
    (3, criterion_3),
    (4, criterion_4),
    (5, criterion_5),
    (6, criterion_6),
    (7, criterion_7),
    (8, criterion_8),
    (9, criterion_9),
]


if __name__ == "__main__":
    failed = 0
    for number, fn in CRITERIA:
        try:
            detail = fn()
            print(f"criterion {number}: PASS  {detail or ''}")
        except Exception as exc:  # report and keep going
            failed += 1
            print(f"criterion {number}: FAIL  {type(exc).__name__}: {exc}")
    sys.exit(1 if failed else 0)
