from fractions import Fraction as F

import pytest

from quasifinite.errors import OutOfWindow
from quasifinite.filtration import gr_filtration_check, normal_ordered_residual
from quasifinite.linalg import SparseMatrix, min_poly, Polynomial
from quasifinite.quotient import TruncationWindow, VoaQuotientEngine, compute_quotient_slice, h_action
from quasifinite.voa import load_voa
from lee_yang_oracle import predicted_quotient_dim


@pytest.fixture(scope="module")
def lee_yang(fixtures_dir):
    return VoaQuotientEngine(load_voa(fixtures_dir / "lee_yang_W12.json"))


@pytest.fixture(scope="module")
def heis4(fixtures_dir):
    return load_voa(fixtures_dir / "heisenberg_W4.json")


def test_trivial_slices(fixtures_dir):
    v = load_voa(fixtures_dir / "trivial.json")
    for n in range(4):
        for d in range(-4, 5):
            sl = compute_quotient_slice(v, n, d)
            assert sl.dim_upper == (1 if d == 0 else 0)
            assert sl.converged


def test_slices_below_minus_n_vanish(heis4):
    e = VoaQuotientEngine(heis4)
    for n in range(3):
        sl = e.slice(n, -n - 1)
        assert sl.dim_upper == 0 and not sl.generators


def test_heisenberg_never_stabilizes(fixtures_dir):
    dims = []
    for W in (2, 3, 4):
        sl = compute_quotient_slice(load_voa(fixtures_dir / f"heisenberg_W{W}.json"), 0, 0)
        assert sl.converged is False
        dims.append(sl.dim_upper)
    assert dims == sorted(set(dims)) and dims == [3, 4, 5]


def test_heisenberg_h_leaves_the_window(heis4):
    e = VoaQuotientEngine(heis4)
    with pytest.raises(OutOfWindow):
        h_action(e, 1, 1)


def test_dim_upper_bookkeeping(heis4):
    e = VoaQuotientEngine(heis4)
    for n in range(2):
        for d in range(-1, 3):
            sl = e.slice(n, d, with_h=False)
            assert sl.dim_upper == len(sl.generators) - sl.rank


def test_relations_replay(heis4, lee_yang):
    for e in (VoaQuotientEngine(heis4), lee_yang):
        for n, d in ((0, 0), (1, 1), (1, -1)):
            sl = e.slice(n, d, with_h=False)
            assert sl.relations
            for rel in sl.relations:
                assert e.replay(n, d, rel) == {}, rel.tag


def test_depth_monotonicity(heis4):
    dims = [VoaQuotientEngine(heis4, TruncationWindow(4, depth=k)).slice(1, 0, with_h=False).dim_upper
            for k in (1, 2, 3)]
    assert dims == sorted(dims, reverse=True)


def test_lee_yang_converged_slices_match_characters(lee_yang):
    seen = 0
    for n in range(3):
        for d in range(-2, 3):
            sl = lee_yang.slice(n, d, with_h=False)
            if sl.converged:
                seen += 1
                assert sl.dim_upper == predicted_quotient_dim(n, d), (n, d)
    assert seen >= 10


def test_lee_yang_hamiltonian(lee_yang):
    left, right = h_action(lee_yang, 0, 0)
    # the two irreducibles have lowest weights 0 and -1/5
    assert min_poly(left) == Polynomial((F(0), F(1, 5), F(1)))
    left1, right1 = h_action(lee_yang, 1, 1)
    assert right1 == left1.shift(-1)
    sl = lee_yang.slice(1, 1)
    assert lee_yang.left_h_via_commutator(sl) == sl.left_h


def test_trivial_h_is_zero(fixtures_dir):
    e = VoaQuotientEngine(load_voa(fixtures_dir / "trivial.json"))
    left, right = h_action(e, 0, 0)
    assert left == right == SparseMatrix.zero(1, 1)


def test_normal_ordered_identity_is_nontrivial(heis4):
    e = VoaQuotientEngine(heis4)
    a = heis4.index("a1")
    for n, p in ((0, -1), (0, 0), (1, 0), (1, 1)):
        for N in (-1, -2):
            sl = e.slice(n, -p, with_h=False)
            lhs = sl.coords(e._kill_vacuum(heis4.basis_product(N, a, a), -p))
            assert normal_ordered_residual(e, n, p, N, a, a) == {}
            assert lhs  # the identity is not 0 = 0


@pytest.mark.parametrize("name", ["trivial", "heisenberg_W4", "lee_yang_W8"])
def test_gr_filtration(fixtures_dir, name):
    rep = gr_filtration_check(load_voa(fixtures_dir / f"{name}.json"))
    assert rep.ok, rep.failures[:3]
    if name != "trivial":
        assert rep.checked["level drop"] > 0 and rep.checked["product identity"] > 0


def test_heisenberg_commutator_drops_a_level(heis4):
    from quasifinite.current import CurrentAlgebra
    ca = CurrentAlgebra(heis4)
    a = heis4.index("a1")
    br = ca.bracket_modes(1, a, -1, a)
    assert set(u for _, u in br) == {heis4.vacuum}
