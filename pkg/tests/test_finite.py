from fractions import Fraction as F

import pytest

from quasifinite.errors import NotConverged
from quasifinite.finite import (bimodule_density_check, extract_finite_algebra, gamma_set, gap_of, in_gamma,
                                minimal_elements, spectrum)
from quasifinite.synthetic import STANDARD_CASES, block_matrix_algebra, standard_algebra
from quasifinite.voa import load_voa


def expected_An_dim(components, n):
    """Blocks of M_size(base) whose row and column levels both lie in Gamma_n."""
    base_dim = {"k": 1, "eps": 2, "T2": 3}
    omega0 = sorted({F(g) + i for g, size, _ in components for i in range(size)})
    gamma0 = [lam for lam in omega0 if not any(mu != lam and (lam - mu).denominator == 1 and lam > mu
                                                 for mu in omega0)]
    gam = {g + k for g in gamma0 for k in range(n + 1)}
    total = 0
    for g, size, kind in components:
        inside = sum(1 for i in range(size) if F(g) + i in gam)
        total += inside * inside * base_dim[kind]
    return total


def test_gamma_bookkeeping():
    omega = [F(0), F(1, 2), F(1), F(2)]
    assert minimal_elements(omega) == [F(0), F(1, 2)]
    assert gap_of(omega) == 2
    assert gamma_set([F(0)], 2) == [0, 1, 2]
    assert in_gamma(F(5, 2), [F(1, 2)])
    assert not in_gamma(F(5, 2), [F(1, 2)], 1)


def test_spectrum_examples():
    s = spectrum(standard_algebra("omega_0_half"), 0)
    assert s.omega == [0, F(1, 2)] and s.gap == 0 and s.gamma_0 == [0, F(1, 2)]
    s = spectrum(standard_algebra("omega_0_2"), 0)
    assert s.omega == [0, 2] and s.gap == 2 and s.gamma_0 == [0]
    s = spectrum(standard_algebra("jordan"), 1)
    assert s.ell == 2 and s.omega_n == [(0, 2), (1, 2)]


@pytest.mark.parametrize("name", sorted(STANDARD_CASES))
def test_spectrum_laws_on_synthetic(name):
    A = standard_algebra(name)
    assert not A.check()
    for n in range(3):
        s = spectrum(A, n)
        assert not s.provisional
        assert not s.violations()


@pytest.mark.parametrize("name", sorted(STANDARD_CASES))
def test_density_on_synthetic(name):
    A = standard_algebra(name)
    for n in range(2):
        for d in range(-2, 3):
            rep = bimodule_density_check(A, n, d)
            assert rep.surjective and rep.converged


@pytest.mark.parametrize("name", sorted(STANDARD_CASES))
def test_An_dimension_and_axioms(name):
    for n in range(3):
        An = extract_finite_algebra(standard_algebra(name), n)
        assert An.dim == expected_An_dim(STANDARD_CASES[name], n)
        assert not An.check()


def test_An_is_a_corner_of_Am():
    A = standard_algebra("omega_0_1")
    big = extract_finite_algebra(A, 2)
    small, embed = big.subalgebra(gamma_set([F(0)], 1))
    assert small.dim == extract_finite_algebra(A, 1).dim
    assert not small.check()
    assert len(set(embed)) == len(embed)


def test_bad_synthetic_algebra_is_caught():
    A = block_matrix_algebra([(0, 2, "k")])
    A.mult[(0, 0)] = {0: F(2)}
    assert A.check()


def test_trivial_voa(fixtures_dir):
    v = load_voa(fixtures_dir / "trivial.json")
    for n in range(4):
        s = spectrum(v, n)
        assert s.omega == [0] and s.gap == 0 and s.ell == 1 and not s.provisional
        An = extract_finite_algebra(v, n)
        assert An.dim == 1 and not An.check()


def test_lee_yang_spectrum(fixtures_dir):
    v = load_voa(fixtures_dir / "lee_yang_W12.json")
    s0, s1 = spectrum(v, 0), spectrum(v, 1)
    assert s0.omega == [F(-1, 5), 0]
    assert s1.omega == [F(-1, 5), 0, F(4, 5)]
    assert s0.gamma_0 == [F(-1, 5), 0] and s0.gap == 0
    assert not s1.violations()


def test_lee_yang_density_on_converged_slices(fixtures_dir):
    v = load_voa(fixtures_dir / "lee_yang_W12.json")
    seen = 0
    for n in range(2):
        for d in range(-1, 2):
            rep = bimodule_density_check(v, n, d)
            if rep.converged:
                seen += 1
                assert rep.surjective
    assert seen


def test_unconverged_slice_refuses_extraction(fixtures_dir):
    v = load_voa(fixtures_dir / "heisenberg_W2.json")
    with pytest.raises(NotConverged):
        extract_finite_algebra(v, 0, gamma_0=[F(0)])
