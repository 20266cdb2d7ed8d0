import json

import pytest

from quasifinite.errors import ParseError
from quasifinite.voa import load_voa
from quasifinite.zhu import c2_class_of, c2_quotient, load_poisson, poisson_check

VALID = ["p_unit", "p_eps", "p_cubic", "p_affine", "p_heis"]


@pytest.mark.parametrize("name", VALID)
def test_valid_fixtures_pass_every_law(fixtures_dir, name):
    p = load_poisson(fixtures_dir / f"{name}.json")
    rep = poisson_check(p)
    assert rep.ok and rep.checked > 0 and rep.skipped == 0


def test_bad_fixture_reports_each_broken_law(fixtures_dir):
    rep = poisson_check(load_poisson(fixtures_dir / "p_eps_bad.json"))
    laws = {name for name, _ in rep.failures}
    assert {"skew-symmetry", "grading of bracket", "Leibniz"} <= laws
    assert "associativity" not in laws


def test_lee_yang_zhu_algebra(fixtures_dir):
    # V / C_2 V is C[w] / (w^2) with a trivial bracket
    for W in (7, 8, 12):
        p = c2_quotient(load_voa(fixtures_dir / f"lee_yang_W{W}.json"))
        assert p.symbols == ("vac", "w") and p.weights == (0, 2)
        assert p.c2_finite_in_window and p.trailing_zeros == W - 2
        assert p.multiply({1: 1}, {1: 1}) == {}
        assert poisson_check(p).ok


def test_heisenberg_zhu_algebra_never_terminates(fixtures_dir):
    for W in (2, 3, 4):
        p = c2_quotient(load_voa(fixtures_dir / f"heisenberg_W{W}.json"))
        # one class a1^r per weight r: the polynomial ring C[a1]
        assert p.profile == {r: 1 for r in range(W + 1)}
        assert not p.c2_finite_in_window
        assert not p.complete


def test_c2_class_of_a_derivative(fixtures_dir):
    v = load_voa(fixtures_dir / "heisenberg_W4.json")
    p = c2_quotient(v)
    # a2 = a1_(-2) vac lies in C_2
    assert c2_class_of(v, p, {v.index("a2"): 1}) == {}
    assert c2_class_of(v, p, {v.index("a1"): 1}) == {p.symbols.index("a1"): 1}


def test_document_roundtrip(fixtures_dir):
    for name in VALID:
        p = load_poisson(fixtures_dir / f"{name}.json")
        again = load_poisson(json.dumps(p.to_document()))
        assert again.to_document() == p.to_document()


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.update(unit="z"), "unit"),
    (lambda d: d["basis"].append({"symbol": "1", "weight": 0}), "distinct"),
    (lambda d: d["basis"][1].update(weight="2"), "integer weight"),
    (lambda d: d["mult"].append(dict(d["mult"][0])), "duplicate"),
])
def test_parse_errors(fixtures_dir, mutate, message):
    doc = json.loads((fixtures_dir / "p_eps.json").read_text())
    mutate(doc)
    with pytest.raises(ParseError, match=message):
        load_poisson(doc)
