"""Birkhoff factorization M = A(1/z) @ diag(z**j) @ B(z) of Laurent matrices.

The input is shifted by a power of z to a polynomial matrix, which is then
brought to column-proper form (invertible leading column coefficient matrix)
by unimodular column operations.  Dividing each column by z**(its degree)
leaves a polynomial in 1/z whose value at infinity is the leading matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from obk.bundle import (
    GaugeBuilder, GaugeTransform, SplittingType, TransitionMatrix, restrict_zero_section,
)
from obk.errors import InternalError
from obk.matrix import (
    Matrix, det, diag_monomials, freeze, laurent_det_monomial, laurent_identity,
    laurent_inverse, lift, mat_mul, thaw, u0_part,
)
from obk.ring import LaurentPoly, Scalar, mpq


@dataclass(frozen=True)
class BirkhoffFactorization:
    A: Matrix
    exponents: tuple[int, ...]
    B: Matrix
    A_inv: Matrix
    B_inv: Matrix

    def reconstruct(self) -> Matrix:
        return mat_mul(mat_mul(self.A, diag_monomials(self.exponents)), self.B)

    @property
    def splitting_type(self) -> SplittingType:
        return SplittingType(self.exponents)


def nullspace(m: list[list[Scalar]]) -> list[list[Scalar]]:
    """Basis of the right kernel of a rational matrix, from its RREF."""
    rows = [list(r) for r in m]
    nrows, ncols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [mpq(0)] * ncols
        v[free] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        basis.append(v)
    return basis


def _column_degree(P, j: int) -> int:
    degs = [P[i][j].max_exp for i in range(len(P)) if P[i][j]]
    if not degs:
        raise InternalError("zero column in a matrix with nonzero determinant")
    return max(degs)


def _pick_reduction(kernel, degs):
    # each kernel vector eliminates its highest-degree supported column
    # (lowest index on ties); take the highest such degree overall
    best = None
    for v in kernel:
        support = [i for i, x in enumerate(v) if x]
        r = min(support, key=lambda i: (-degs[i], i))
        key = (-degs[r], r)
        if best is None or key < best[0]:
            best = (key, r, v)
    return best[1], best[2]


def column_reduce(P: Matrix) -> tuple[Matrix, Matrix, Matrix, list[int]]:
    """Column-proper form P @ U of a polynomial matrix.

    Returns (P @ U, U, U^-1, column degrees) with U unimodular.
    """
    n = len(P)
    P = thaw(P)
    U = thaw(laurent_identity(n))
    Uinv = thaw(laurent_identity(n))
    while True:
        degs = [_column_degree(P, j) for j in range(n)]
        lead = [[P[i][j].coeff(degs[j]) for j in range(n)] for i in range(n)]
        kernel = nullspace(lead)
        if not kernel:
            return freeze(P), freeze(U), freeze(Uinv), degs
        r, v = _pick_reduction(kernel, degs)
        for i in range(n):
            if i == r or not v[i]:
                continue
            f = LaurentPoly({degs[r] - degs[i]: v[i] / v[r]})
            for row in P:
                row[r] = row[r] + row[i] * f
            for row in U:
                row[r] = row[r] + row[i] * f
            Uinv[i] = [a - f * b for a, b in zip(Uinv[i], Uinv[r])]


def birkhoff_factorize(m: Matrix) -> BirkhoffFactorization:
    """Factor a Laurent matrix with monomial determinant c*z**d.

    Exponents come out sorted descending, with ties kept in column order.
    Raises NotInvertibleOnOverlapError when det(m) is not a monomial.
    """
    m = freeze(m)
    n = len(m)
    _, d = laurent_det_monomial(m)
    shift = -min(f.min_exp for row in m for f in row if f)
    P = tuple(tuple(f.shift(shift) for f in row) for row in m)
    Pc, U, Uinv, degs = column_reduce(P)

    A = tuple(tuple(Pc[i][j].shift(-degs[j]) for j in range(n)) for i in range(n))
    exps = [dj - shift for dj in degs]
    order = sorted(range(n), key=lambda i: (-exps[i], i))

    A = tuple(tuple(row[i] for i in order) for row in A)
    A_inv = laurent_inverse(A)
    B = tuple(Uinv[i] for i in order)
    B_inv = tuple(tuple(row[i] for i in order) for row in U)
    exps = tuple(exps[i] for i in order)

    fact = BirkhoffFactorization(A, exps, B, A_inv, B_inv)
    if sum(exps) != d:
        raise InternalError(f"exponent sum {sum(exps)} != determinant degree {d}")
    dA = det(A)
    if not (dA.is_monomial() and dA.min_exp == 0):
        raise InternalError(f"A-factor determinant {dA} is not constant")
    if fact.reconstruct() != m:
        raise InternalError("Birkhoff reconstruction failed")
    return fact


def splitting_type(t: TransitionMatrix) -> SplittingType:
    return birkhoff_factorize(restrict_zero_section(t)).splitting_type


def prepare_into(b: GaugeBuilder) -> tuple[int, ...]:
    """Apply the Birkhoff gauge to the builder's working matrix.

    Returns the sorted exponents; afterwards the u^0 part of ``b.target``
    is exactly diag(z**j).
    """
    fact = birkhoff_factorize(u0_part(freeze(b.target)))
    n, N = b.n, b.trunc
    if fact.A_inv != laurent_identity(n):
        b.left_mul(lift(fact.A_inv, N), lift(fact.A, N))
    if fact.B_inv != laurent_identity(n):
        b.right_mul(lift(fact.B_inv, N), lift(fact.B, N))
    if u0_part(freeze(b.target)) != diag_monomials(fact.exponents):
        raise InternalError("u^0 part is not diagonal after Birkhoff gauge")
    return fact.exponents


def prepare_diagonal(t: TransitionMatrix) -> tuple[TransitionMatrix, GaugeTransform]:
    """Gauge t so that its u^0 part is exactly diag(z**j), j descending."""
    b = GaugeBuilder(t.rank, t.k, t.trunc, target=t.entries)
    prepare_into(b)
    return b.matrix(), b.gauge()
