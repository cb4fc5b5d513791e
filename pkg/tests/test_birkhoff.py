import pytest

from obk.birkhoff import birkhoff_factorize, column_reduce, nullspace, prepare_diagonal, splitting_type
from obk.bundle import SplittingType, TransitionMatrix
from obk.errors import NotInvertibleOnOverlapError
from obk.harness import planted_birkhoff
from obk.matrix import diag_monomials, laurent_det_monomial, laurent_identity, mat_mul
from obk.ring import LaurentPoly, UJet, mpq

from conftest import jet, tm

Z = LaurentPoly


def lmat(rows):
    return tuple(tuple(Z(e) for e in row) for row in rows)


def is_poly_in(m, sign):
    # sign=+1: polynomial in z; sign=-1: polynomial in 1/z
    return all(sign * e >= 0 for row in m for f in row for e in f.exponents())


def check_certificate(m, f):
    assert f.reconstruct() == m
    assert is_poly_in(f.A, -1) and is_poly_in(f.A_inv, -1)
    assert is_poly_in(f.B, 1) and is_poly_in(f.B_inv, 1)
    n = len(m)
    assert mat_mul(f.A, f.A_inv) == laurent_identity(n)
    assert mat_mul(f.B, f.B_inv) == laurent_identity(n)
    assert laurent_det_monomial(f.A)[1] == 0 == laurent_det_monomial(f.B)[1]


def test_diagonal_is_already_factored():
    m = lmat([[{3: 1}, {}], [{}, {0: 1}]])
    f = birkhoff_factorize(m)
    assert f.exponents == (3, 0)
    assert f.A == laurent_identity(2) == f.B


def test_jordan_block_splits_evenly():
    m = lmat([[{1: 1}, {0: 1}], [{}, {1: 1}]])
    f = birkhoff_factorize(m)
    assert f.exponents == (1, 1)
    check_certificate(m, f)
    # the documented certificate is valid too
    A = lmat([[{0: 1}, {-1: 1}], [{}, {0: 1}]])
    assert mat_mul(A, diag_monomials((1, 1))) == m


def test_constant_permutation():
    m = lmat([[{}, {0: 1}], [{0: 1}, {}]])
    f = birkhoff_factorize(m)
    assert f.exponents == (0, 0)
    check_certificate(m, f)
    assert all(x.exponents() in ((), (0,)) for M in (f.A, f.B) for row in M for x in row)


def test_non_monomial_determinant():
    with pytest.raises(NotInvertibleOnOverlapError):
        birkhoff_factorize(lmat([[{1: 1}, {0: 1}], [{0: 1}, {1: 1}]]))


def test_splitting_type_examples():
    t = tm(1, 2, [[{(0, 3): 1}, {(1, 5): 2, (2, -1): 1}], [{(1, 0): 3}, {(0, 0): 1}]])
    assert splitting_type(t) == SplittingType((3, 0))
    assert splitting_type(tm(1, 1, [[{(0, 1): 1}, {(0, 0): 1}], [{}, {(0, 1): 1}]])).exponents == (1, 1)
    assert splitting_type(tm(2, 0, [[{(0, 5): 1}]])).exponents == (5,)


def test_nullspace():
    m = [[mpq(1), mpq(2), mpq(3)], [mpq(2), mpq(4), mpq(6)]]
    basis = nullspace(m)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_column_reduce_gives_proper_leading_matrix():
    P = lmat([[{2: 1}, {1: 1}], [{1: 1}, {0: 1, 3: 1}]])
    Pc, U, Uinv, degs = column_reduce(P)
    assert mat_mul(P, U) == Pc
    assert mat_mul(U, Uinv) == laurent_identity(2)
    lead = [[Pc[i][j].coeff(degs[j]) for j in range(2)] for i in range(2)]
    assert lead[0][0] * lead[1][1] - lead[0][1] * lead[1][0] != 0


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_planted_exponents_recovered(rank):
    for seed in range(30):
        m, e = planted_birkhoff(seed, rank)
        f = birkhoff_factorize(m)
        assert f.exponents == tuple(sorted(e, reverse=True))
        assert sum(f.exponents) == laurent_det_monomial(m)[1]
        check_certificate(m, f)


def test_prepare_diagonal_identity_on_sorted_diagonal():
    t = tm(1, 2, [[{(0, 3): 1}, {(1, 2): 1}], [{}, {(0, 0): 1}]])
    out, g = prepare_diagonal(t)
    assert out == t and g.is_identity()


def test_prepare_diagonal_jordan_block():
    t = tm(1, 1, [[{(0, 1): 1}, {(0, 0): 1}], [{}, {(0, 1): 1}]])
    out, g = prepare_diagonal(t)
    assert out == tm(1, 1, [[{(0, 1): 1}, {}], [{}, {(0, 1): 1}]])
    one, zero = UJet.one(1), UJet.zero(1)
    assert g.left == ((one, jet(1, {(0, -1): -1})), (zero, one))
    assert g.problems() == []


def test_prepare_diagonal_sorts_by_permutation():
    t = tm(1, 2, [[{(0, 0): 1}, {}], [{}, {(0, 3): 1}]])
    out, g = prepare_diagonal(t)
    assert out == tm(1, 2, [[{(0, 3): 1}, {}], [{}, {(0, 0): 1}]])
    for M in (g.left, g.right):
        assert all(x.u_degree in (None, 0) and x[0].exponents() in ((), (0,))
                   for row in M for x in row)


@pytest.mark.parametrize("seed", range(10))
def test_prepare_diagonal_is_idempotent(seed):
    m, e = planted_birkhoff(seed, 3, exp_range=(0, 5))
    rows = tuple(tuple(UJet(2, [x, Z(), Z()]) for x in row) for row in m)
    once, _ = prepare_diagonal(TransitionMatrix(1, rows))
    twice, g = prepare_diagonal(once)
    assert twice == once and g.is_identity()
    assert [once.entries[i][i][0] for i in range(3)] == [Z({j: 1}) for j in sorted(e, reverse=True)]
