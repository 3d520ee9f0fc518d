import copy
import random

import pytest

from wonderful import fm_building_set, kapranov_m0n, ulyanov_building_set, wonderful
from wonderful.certify import certify_space, certify_trace, certify_wonderful, to_json
from wonderful.checker import check_certificate
from wonderful.lattice import poison
from wonderful.space import FALSE, TRUE, UNKNOWN, atom, product, projective_space


def random_instances(seed, count):
    rng = random.Random(seed)
    vals = [TRUE, FALSE, UNKNOWN]
    for _ in range(count):
        gen = rng.choice([fm_building_set, ulyanov_building_set])
        x = atom("X", rng.randint(1, 2), rng.choice(vals), rng.choice(vals))
        amb, bs = gen(x, rng.randint(2, 3))
        eid = rng.choice(bs.closure())
        yield wonderful(amb, poison(bs, eid, rng.choice(vals), rng.choice(vals)))


def test_generated_certificates_recheck():
    for tr in random_instances(7, 25):
        for c in (certify_trace(tr), certify_wonderful(tr)):
            res = check_certificate(to_json(c))
            assert res.ok, res.errors


def test_kapranov_certificate_rechecks():
    amb, bs = kapranov_m0n(6)
    assert check_certificate(to_json(certify_trace(wonderful(amb, bs)))).ok


def test_tampered_verdict_detected():
    amb, bs = fm_building_set(projective_space(2), 2)
    doc = to_json(certify_wonderful(bs))
    bad = copy.deepcopy(doc)
    bad["claim"]["verdict"] = "false"
    res = check_certificate(bad)
    assert not res.ok and "MAIN_THEOREM" in res.errors[0]


def test_tampered_leaf_detected():
    doc = to_json(certify_space(product(atom("A", 1, ordinary=True), atom("B", 1, ordinary=True))))
    leaf = doc["premises"][0]
    assert leaf["rule"] == "ATOM_FACT"
    leaf["atom"]["ordinary"] = "false"
    res = check_certificate(doc)
    assert not res.ok and "atom A" in res.errors[0]


@pytest.mark.parametrize(
    "mutate,msg",
    [
        (lambda d: d["premises"].pop(), "premises"),
        (lambda d: d.update(rule="MADE_UP"), "unknown rule"),
        (lambda d: d["premises"][1]["claim"].update(property="ordinary"), "properties"),
    ],
)
def test_malformed_nodes(mutate, msg):
    doc = to_json(certify_space(product(atom("A", 1, ordinary=True), atom("B", 1))))
    mutate(doc)
    res = check_certificate(doc)
    assert not res.ok and any(msg in e for e in res.errors)


def test_wrapped_document_accepted():
    doc = {"certificate": to_json(certify_space(projective_space(1)))}
    assert check_certificate(doc).ok
