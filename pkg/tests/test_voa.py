import json
from fractions import Fraction as F

import pytest

from quasifinite.errors import InvariantViolation, OutOfWindow, ParseError
from quasifinite.voa import check_axioms, check_borcherds, load_voa, to_document, truncate, validate
from vertex_oracle import FreeBoson


def test_trivial_loads(fixtures_dir):
    v = load_voa(fixtures_dir / "trivial.json")
    assert v.dim == 1 and v.conformal is None
    assert v.basis_product(-1, 0, 0) == {0: 1}


def test_heisenberg_products_match_free_boson(fixtures_dir):
    v = load_voa(fixtures_dir / "heisenberg_W4.json")
    fb = FreeBoson()
    a1, a2 = v.index("a1"), v.index("a2")
    # a1_(n) a1 against the Fock-space modes
    for n in range(-3, 3):
        if not v.in_window(n, a1, a1):
            continue
        ours = v.basis_product(n, a1, a1)
        theirs = fb.mode((1,), n, (1,))
        # symbol w stands for a1a1 / 2
        conv = {}
        for mono, c in theirs.items():
            if mono == (1, 1):
                conv[v.index("w")] = 2 * c
            elif mono == ():
                conv[v.vacuum] = c
            else:
                conv[v.index("".join(f"a{k}" for k in mono))] = c
        assert ours == conv, n
    assert v.basis_product(0, a1, a2) == {}
    assert v.basis_product(1, a1, a1) == {v.vacuum: 1}


def test_out_of_window_raises(fixtures_dir):
    v = load_voa(fixtures_dir / "heisenberg_W2.json")
    with pytest.raises(OutOfWindow):
        v.basis_product(-3, v.index("w"), v.index("w"))


def test_mislabel_is_rejected_with_every_violation(fixtures_dir):
    with pytest.raises(InvariantViolation) as exc:
        load_voa(fixtures_dir / "heisenberg_mislabel.json")
    assert len(exc.value.violations) > 1
    assert all("product" in s or "basis" in s for s in exc.value.violations)


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.pop("vacuum"), "vacuum"),
    (lambda d: d.update(central_charge="2/4"), "lowest terms"),
    (lambda d: d.update(central_charge="1"), "p/q"),
    (lambda d: d["products"].append(dict(d["products"][0])), "duplicate"),
    (lambda d: d["basis"].append({"symbol": "vac", "weight": 0}), "distinct"),
])
def test_parse_errors(fixtures_dir, mutate, message):
    doc = json.loads((fixtures_dir / "heisenberg_W2.json").read_text())
    mutate(doc)
    with pytest.raises(ParseError, match=message):
        load_voa(doc)


def test_invalid_json_reports_position():
    with pytest.raises(ParseError, match="line"):
        load_voa("{\n  \"name\": ,\n}")


def test_document_roundtrip(fixtures_dir):
    for name in ("trivial", "heisenberg_W3", "lee_yang_W8"):
        v = load_voa(fixtures_dir / f"{name}.json")
        doc = to_document(v)
        again = to_document(load_voa(json.dumps(doc)))
        assert doc == again


def test_truncate_shrinks_window(fixtures_dir):
    v = load_voa(fixtures_dir / "heisenberg_W4.json")
    t = truncate(v, 2)
    assert t.max_weight == 2
    assert not validate(t)
    assert t.dim == len([w for w in v.weights if w <= 2])


def test_axioms_pass_on_fixtures(fixtures_dir):
    for name in ("trivial", "heisenberg_W4", "lee_yang_W8"):
        rep = check_axioms(load_voa(fixtures_dir / f"{name}.json"))
        assert rep.ok, rep.failures[:3]
        assert rep.checks > 0


def test_borcherds_clean_on_lee_yang(fixtures_dir):
    rep = check_borcherds(load_voa(fixtures_dir / "lee_yang_W7.json"), bound=2)
    assert rep.checked > 0 and not rep.residuals


def test_borcherds_detects_a_single_coefficient_flip(fixtures_dir):
    doc = json.loads((fixtures_dir / "heisenberg_W3.json").read_text())
    for p in doc["products"]:
        if p["left"] == "a1" and p["right"] == "a1" and p["n"] == 1:
            p["value"] = [["vac", "2/1"]]
    rep = check_borcherds(load_voa(doc), bound=2)
    assert rep.residuals
    r = rep.residuals[0]
    assert F(0) not in r.residual.values()
