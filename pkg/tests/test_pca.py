import json
from fractions import Fraction as F

import pytest

from quasifinite.errors import StepLimitExceeded
from quasifinite.pca import (LoopSymbol, bracket_degree_check, dim_bound, enumerate_indices,
                             enumerate_indices_bounded, is_strict, loop_bracket, max_strict_length, measure,
                             normalize, poisson_ideal_identity_check, psi_surjection_check, replay_certificate,
                             spanning_monomials, straighten)
from quasifinite.synthetic import standard_algebra
from quasifinite.voa import load_voa
from quasifinite.zhu import load_poisson
from pca_oracle import brute_bound, brute_indices, distinct_partitions, ideal_identity_defect, read_poisson, square_of_nilpotent

VALID = ["p_unit", "p_eps", "p_cubic", "p_affine", "p_heis"]


@pytest.fixture(scope="module")
def p_eps(fixtures_dir):
    return load_poisson(fixtures_dir / "p_eps.json")


def test_loop_bracket(fixtures_dir):
    p = load_poisson(fixtures_dir / "p_affine.json")
    x, y = p.symbols.index("x"), p.symbols.index("y")
    assert loop_bracket(p, LoopSymbol(1, x), LoopSymbol(2, y)) == {LoopSymbol(3, y): 1}
    assert loop_bracket(p, LoopSymbol(2, y), LoopSymbol(1, x)) == {LoopSymbol(3, y): -1}
    assert loop_bracket(p, LoopSymbol(0, x), LoopSymbol(0, x)) == {}
    assert LoopSymbol(-2, x).degree == 2


def test_unit_symbols(p_eps):
    assert normalize(p_eps, [(0, p_eps.unit), (1, 1)]) == ((1, 1),)
    assert normalize(p_eps, [(2, p_eps.unit), (1, 1)]) is None


def test_index_examples():
    assert enumerate_indices(0, 0, 0) == [()]
    assert enumerate_indices(1, 0, 0) == [(0,)]
    assert enumerate_indices(2, 0, 1, strict=False) == [(0, 0), (1, -1)]
    assert enumerate_indices(2, 0, 1, strict=True) == [(1, -1)]
    assert enumerate_indices(3, -1, 0) == []


@pytest.mark.parametrize("strict", [True, False])
def test_enumerators_agree_with_brute_force(strict):
    for n in range(3):
        for d in range(-4, 5):
            for k in range(5):
                want = brute_indices(k, d, n, strict)
                assert enumerate_indices(k, d, n, strict) == want
                assert enumerate_indices_bounded(k, d, n, strict) == want


def test_max_strict_length():
    for n in range(4):
        for d in range(-n, 6):
            k = max_strict_length(d, n)
            assert distinct_partitions(d + k * (n + 1), k)
            assert not distinct_partitions(d + (k + 1) * (n + 1), k + 1)


@pytest.mark.parametrize("name", VALID)
def test_dim_bound_matches_brute_force(fixtures_dir, name):
    p = load_poisson(fixtures_dir / f"{name}.json")
    for n in range(4):
        for d in range(-4, 5):
            rep = dim_bound(p, n, d)
            assert rep.bound == brute_bound(p.r, n, d), (n, d)
            if rep.bound < 2000:
                assert rep.bound == len(spanning_monomials(p, n, d))


def test_dim_bound_below_minus_n_is_zero(p_eps):
    assert dim_bound(p_eps, 2, -3).bound == 0
    assert dim_bound(p_eps, 2, -2).bound > 0


def test_bound_grows_with_n(p_eps):
    for d in range(-2, 4):
        bs = [dim_bound(p_eps, n, d).bound for n in range(4)]
        assert bs == sorted(bs)


def test_saturation_tightens(p_eps):
    for n in range(2):
        for d in range(-1, 4):
            rep = dim_bound(p_eps, n, d, saturate=2)
            assert 0 <= rep.saturated_upper <= rep.bound


def test_lee_yang_slices_fit_under_the_saturated_bound(p_eps, fixtures_dir):
    # Lee-Yang has Zhu algebra C[w]/(w^2), which is p_eps
    from quasifinite.quotient import VoaQuotientEngine
    e = VoaQuotientEngine(load_voa(fixtures_dir / "lee_yang_W12.json"))
    for n in range(2):
        for d in range(-1, 2):
            sl = e.slice(n, d, with_h=False)
            if sl.converged:
                assert sl.dim_upper <= dim_bound(p_eps, n, d, saturate=2).saturated_upper


def test_square_of_nilpotent(p_eps):
    e = p_eps.symbols.index("e")
    res = straighten(p_eps, [(2, e), (2, e)], 3)
    want = {tuple(sorted(k, key=lambda t: -t[0])): F(c) for k, c in square_of_nilpotent(2, 3, e).items()}
    assert res.poly == want
    assert len(want) == 5


def test_straighten_certificate(fixtures_dir):
    p = load_poisson(fixtures_dir / "p_cubic.json")
    x = p.symbols.index("x")
    start = normalize(p, [(1, x), (1, x), (0, x), (0, x)])
    res = straighten(p, start, 2)
    assert all(is_strict(m) for m in res.poly)
    assert res.steps
    assert not replay_certificate(p, {start: F(1)}, res, 2)
    # tampering with a logged step is detected
    st = res.steps[0]
    st.outputs = {m: c + 1 for m, c in st.outputs.items()}
    assert replay_certificate(p, {start: F(1)}, res, 2)


def test_measure_decreases_along_steps(fixtures_dir):
    p = load_poisson(fixtures_dir / "p_heis.json")
    res = straighten(p, [(0, 1), (0, 2), (0, 1), (0, 3)], 1)
    for st in res.steps:
        assert all(measure(m) < measure(st.monomial) for m in st.outputs)


def test_killed_monomials_vanish(p_eps):
    assert straighten(p_eps, [(-2, 1), (3, 1)], 1).poly == {}


def test_step_limit(p_eps):
    with pytest.raises(StepLimitExceeded):
        straighten(p_eps, [(1, 1)] * 4, 3, limit=2)


@pytest.mark.parametrize("name", VALID)
def test_ideal_identity_matches_oracle(fixtures_dir, name):
    path = fixtures_dir / f"{name}.json"
    p, P = load_poisson(path), read_poisson(path)
    rep = poisson_ideal_identity_check(p, bound=2)
    assert rep.ok and rep.checked == p.dim ** 3 * 25
    for x in range(p.dim):
        for y in range(p.dim):
            for z in range(p.dim):
                assert not ideal_identity_defect(P, x, y, z, 1, -1)


def test_ideal_identity_needs_leibniz(fixtures_dir):
    path = fixtures_dir / "p_eps_bad.json"
    rep = poisson_ideal_identity_check(load_poisson(path), bound=1)
    assert not rep.ok
    P = read_poisson(path)
    # the failing instances are exactly those where the windowed oracle sees a defect
    want = {(x, y, z, m, n) for x in range(2) for y in range(2) for z in range(2)
            for m in range(-1, 2) for n in range(-1, 2) if ideal_identity_defect(P, x, y, z, m, n, J=20)}
    assert {f[:5] for f in rep.failures} == want


def test_bracket_degrees(fixtures_dir):
    p = load_poisson(fixtures_dir / "p_affine.json")
    assert not bracket_degree_check(p, range(-2, 3))


def test_psi_check_statuses(fixtures_dir):
    ly = load_voa(fixtures_dir / "lee_yang_W12.json")
    rep = psi_surjection_check(ly, 1, 0)
    assert rep.status == "PASS" and rep.generator_checks > 0
    assert rep.quotient_dim <= rep.bound
    assert psi_surjection_check(ly, 1, 2).status == "INCONCLUSIVE"
    heis = psi_surjection_check(load_voa(fixtures_dir / "heisenberg_W4.json"), 0, 0)
    assert heis.status == "INCONCLUSIVE" and heis.c2_finite is False
    triv = psi_surjection_check(load_voa(fixtures_dir / "trivial.json"), 0, 0)
    assert triv.status == "PASS" and triv.bound == triv.quotient_dim == 1


def test_psi_check_on_synthetic_source(fixtures_dir):
    A = standard_algebra("omega_0")
    p = load_poisson(fixtures_dir / "p_unit.json")
    assert psi_surjection_check(A, 0, 0, p=p).status == "PASS"
    # Q_1(0) has dim 2 but the unit-only algebra allows 1
    assert psi_surjection_check(A, 1, 0, p=p).status == "FAIL"
    with pytest.raises(ValueError):
        psi_surjection_check(A, 0, 0)
