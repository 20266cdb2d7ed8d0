from fractions import Fraction as F

import pytest

from quasifinite.errors import NonRationalSpectrum, ParseError
from quasifinite.linalg import (Polynomial, RowReducer, SparseMatrix, binomial, format_rational, gen_eigen_split,
                                inverse, min_poly, parse_rational, rank_kernel, rational_factorization,
                                solve_in_span, span_rank)


def test_parse_and_format_rationals():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-6/4") == F(-3, 2)
    assert parse_rational("5") == 5
    assert format_rational(F(-3, 2)) == "-3/2"
    assert format_rational(0) == "0/1"


@pytest.mark.parametrize("bad", ["6/4", "5", "1/0", "1/-2", "x/2", 3])
def test_strict_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad, strict=True)


def test_generalized_binomial():
    assert binomial(5, 2) == 10
    assert binomial(2, 3) == 0
    assert binomial(-1, 4) == 1
    assert binomial(-2, 3) == -4
    assert binomial(3, -1) == 0


def test_row_reducer_rank_and_reduce():
    red = RowReducer()
    assert red.add({0: F(1), 1: F(1)})
    assert red.add({1: F(1), 2: F(1)})
    assert not red.add({0: F(1), 1: F(2), 2: F(1)})
    assert red.rank == 2
    assert red.reduce({0: F(1), 1: F(1)}) == {}


def test_rank_kernel_of_singular_matrix():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    rank, ker = rank_kernel(m)
    assert rank == 2
    assert len(ker) == 1
    assert m.apply(ker[0]) == {}


def test_solve_in_span():
    vs = [{0: F(1)}, {1: F(1)}, {0: F(1), 1: F(1)}]
    c = solve_in_span(vs, {0: F(2), 1: F(3)})
    total = {}
    for ci, v in zip(c, vs):
        for k, x in v.items():
            total[k] = total.get(k, 0) + ci * x
    assert {k: x for k, x in total.items() if x} == {0: 2, 1: 3}
    assert solve_in_span([{0: F(1)}], {1: F(1)}) is None


def test_inverse_roundtrip():
    m = SparseMatrix.from_dense([[2, 1], [1, 1]])
    assert m @ inverse(m) == SparseMatrix.identity(2)


def test_min_poly_of_jordan_block():
    m = SparseMatrix.from_dense([[2, 1], [0, 2]])
    assert min_poly(m) == Polynomial((F(4), F(-4), F(1)))


def test_rational_factorization_splits_roots():
    p = Polynomial.x_minus(F(1, 2)) * Polynomial.x_minus(3) ** 2 * Polynomial((F(2), F(0), F(1)))
    roots, others = rational_factorization(p)
    assert roots == [(F(1, 2), 1), (F(3), 2)]
    assert len(others) == 1 and others[0][0].degree == 2


def test_gen_eigen_split_defective():
    m = SparseMatrix.from_dense([[1, 1, 0], [0, 1, 0], [0, 0, F(-1, 5)]])
    sp = gen_eigen_split(m)
    assert sp.eigenvalues == (F(-1, 5), F(1))
    assert sp.dims() == {F(-1, 5): 1, F(1): 2}
    assert span_rank([v for blk in sp.blocks for v in blk]) == 3


def test_non_rational_spectrum_raises():
    m = SparseMatrix.from_dense([[0, 2], [1, 0]])
    with pytest.raises(NonRationalSpectrum):
        gen_eigen_split(m)
