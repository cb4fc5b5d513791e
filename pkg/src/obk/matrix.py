"""Small dense matrices over LaurentPoly or UJet, stored as tuples of rows."""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

from obk.errors import DimensionMismatchError, NotInvertibleOnOverlapError
from obk.ring import LaurentPoly, UJet

T = TypeVar("T")
Matrix = tuple[tuple[T, ...], ...]


def freeze(rows: Sequence[Sequence[T]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def thaw(m: Matrix) -> list[list]:
    return [list(r) for r in m]


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def mat_map(f: Callable, m: Matrix) -> Matrix:
    return tuple(tuple(f(x) for x in row) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, p = shape(a)
    p2, q = shape(b)
    if p != p2:
        raise DimensionMismatchError(f"cannot multiply {n}x{p} by {p2}x{q}")
    out = []
    for i in range(n):
        row = []
        for j in range(q):
            acc = a[i][0] * b[0][j]
            for t in range(1, p):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise DimensionMismatchError("shape mismatch")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def minor(m: Matrix, i: int, j: int) -> Matrix:
    return tuple(tuple(x for c, x in enumerate(row) if c != j)
                 for r, row in enumerate(m) if r != i)


def det(m: Matrix):
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    acc = None
    for j in range(n):
        if not m[0][j]:
            continue
        term = m[0][j] * det(minor(m, 0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return m[0][0]  # whole first row is zero
    return acc


def adjugate(m: Matrix) -> Matrix:
    n = len(m)
    if n == 1:
        return ((m[0][0] * 0 + 1,),)
    cof = [[det(minor(m, i, j)) * (-1 if (i + j) % 2 else 1) for j in range(n)]
           for i in range(n)]
    return transpose(freeze(cof))


# -- Laurent matrices ------------------------------------------------------

def laurent_identity(n: int) -> Matrix:
    one, zero = LaurentPoly.one(), LaurentPoly.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def laurent_det_monomial(m: Matrix) -> tuple:
    """(c, d) with det(m) = c*z**d; raises if det is not a nonzero monomial."""
    d = det(m)
    if not d.is_monomial():
        raise NotInvertibleOnOverlapError(
            f"determinant {d} is not a nonzero monomial c*z^d")
    return d.as_monomial()


def laurent_inverse(m: Matrix) -> Matrix:
    c, d = laurent_det_monomial(m)
    inv_det = LaurentPoly({-d: 1 / c})
    return mat_map(lambda x: x * inv_det, adjugate(m))


def diag_monomials(exponents: Sequence[int]) -> Matrix:
    n = len(exponents)
    zero = LaurentPoly.zero()
    return tuple(tuple(LaurentPoly({exponents[i]: 1}) if i == j else zero
                       for j in range(n)) for i in range(n))


def permutation_matrix(order: Sequence[int]) -> Matrix:
    """Matrix P with (P @ x)[t] = x[order[t]]."""
    n = len(order)
    one, zero = LaurentPoly.one(), LaurentPoly.zero()
    return tuple(tuple(one if j == order[t] else zero for j in range(n))
                 for t in range(n))


# -- jet matrices ----------------------------------------------------------

def jet_identity(n: int, trunc: int) -> Matrix:
    one, zero = UJet.one(trunc), UJet.zero(trunc)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def jet_zeros(n: int, trunc: int) -> Matrix:
    zero = UJet.zero(trunc)
    return tuple(tuple(zero for _ in range(n)) for _ in range(n))


def lift(m: Matrix, trunc: int) -> Matrix:
    """Embed a Laurent matrix as u-constant jets."""
    return mat_map(lambda f: UJet.constant(f, trunc), m)


def u0_part(m: Matrix) -> Matrix:
    return mat_map(lambda f: f.coeffs[0], m)


def first_mismatch(a: Matrix, b: Matrix):
    """First (row, col, u, z, a_coeff, b_coeff), 1-based row/col, or None."""
    for r, (ra, rb) in enumerate(zip(a, b)):
        for c, (x, y) in enumerate(zip(ra, rb)):
            if x == y:
                continue
            tx = {(u, z): v for u, z, v in x.terms()}
            ty = {(u, z): v for u, z, v in y.terms()}
            for key in sorted(set(tx) | set(ty)):
                vx, vy = tx.get(key, 0), ty.get(key, 0)
                if vx != vy:
                    return r + 1, c + 1, key[0], key[1], vx, vy
    return None
