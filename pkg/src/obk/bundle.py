"""Transition matrices of rank-n bundles on M_k and their gauge transformations.

Convention: a transition matrix maps the trivialization over chart U to the
one over chart V.  A gauge is a pair (left, right) acting as
``left @ T @ right``, where ``left`` must be holomorphic on V and ``right``
holomorphic on U, each with a holomorphic inverse.  The diagonal u^0
exponents j are reported raw; z**j on the diagonal means the restriction to
the zero section contains the summand with transition function z**j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from obk.errors import DimensionMismatchError, InvariantError, NotInvertibleOnOverlapError
from obk.matrix import (
    Matrix, det, first_mismatch, freeze, jet_identity, laurent_det_monomial,
    mat_mul, thaw, u0_part,
)
from obk.ring import UJet, is_u_holomorphic, is_v_holomorphic


def _check_square(entries: Matrix, what: str) -> tuple[int, int]:
    n = len(entries)
    if n == 0 or any(len(r) != n for r in entries):
        raise DimensionMismatchError(f"{what} must be a nonempty square matrix")
    trunc = entries[0][0].trunc
    for row in entries:
        for x in row:
            if not isinstance(x, UJet):
                raise TypeError(f"{what} entries must be UJet")
            if x.trunc != trunc:
                raise InvariantError(f"{what} entries have mixed truncation orders")
    return n, trunc


@dataclass(frozen=True)
class TransitionMatrix:
    k: int
    entries: Matrix

    def __post_init__(self):
        if self.k < 1:
            raise InvariantError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "entries", freeze(self.entries))
        _check_square(self.entries, "transition matrix")
        try:
            laurent_det_monomial(u0_part(self.entries))
        except NotInvertibleOnOverlapError as exc:
            raise NotInvertibleOnOverlapError(
                f"u^0 part is not invertible on U∩V: {exc}") from None

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def trunc(self) -> int:
        return self.entries[0][0].trunc

    @classmethod
    def from_terms(cls, k: int, rank: int, trunc: int,
                   terms: Mapping[tuple[int, int], Mapping[tuple[int, int], object]]):
        """Build from {(row, col): {(u, z): c}} with 0-based row/col."""
        zero = UJet.zero(trunc)
        rows = [[zero] * rank for _ in range(rank)]
        for (r, c), t in terms.items():
            rows[r][c] = UJet.from_terms(trunc, t)
        return cls(k, freeze(rows))

    def det_u0(self) -> tuple:
        """(c, d) with the u^0 part of det equal to c*z**d."""
        return laurent_det_monomial(u0_part(self.entries))

    def with_trunc(self, trunc: int) -> TransitionMatrix:
        return TransitionMatrix(self.k, tuple(tuple(x.with_trunc(trunc) for x in row)
                                              for row in self.entries))

    def max_u_degree(self) -> int:
        degs = [x.u_degree for row in self.entries for x in row]
        return max((d for d in degs if d is not None), default=0)

    def __str__(self) -> str:
        rows = ["[" + ", ".join(str(x) for x in row) + "]" for row in self.entries]
        return f"k={self.k} [" + ", ".join(rows) + "]"


def restrict_zero_section(t: TransitionMatrix) -> Matrix:
    """The u^0 part of every entry, as a matrix of LaurentPoly."""
    return u0_part(t.entries)


@dataclass(frozen=True)
class SplittingType:
    exponents: tuple[int, ...]

    def __post_init__(self):
        ex = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", ex)
        if any(a < b for a, b in zip(ex, ex[1:])):
            raise InvariantError(f"splitting exponents must be descending: {ex}")

    def __iter__(self):
        return iter(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def __str__(self) -> str:
        return " ".join(str(e) for e in self.exponents)


@dataclass(frozen=True)
class GaugeTransform:
    """Admissible change of trivializations, with stored inverses.

    Construction verifies chart holomorphy of all four matrices and both
    inverse products exactly; ``unchecked`` skips that for diagnostics.
    """

    k: int
    left: Matrix
    left_inv: Matrix
    right: Matrix
    right_inv: Matrix
    checked: bool = field(default=True, compare=False)

    def __post_init__(self):
        for name in ("left", "left_inv", "right", "right_inv"):
            object.__setattr__(self, name, freeze(getattr(self, name)))
        if self.checked:
            problems = self.problems()
            if problems:
                raise InvariantError("inadmissible gauge: " + "; ".join(problems))

    @classmethod
    def unchecked(cls, k, left, left_inv, right, right_inv) -> GaugeTransform:
        return cls(k, left, left_inv, right, right_inv, checked=False)

    @classmethod
    def identity(cls, n: int, k: int, trunc: int) -> GaugeTransform:
        eye = jet_identity(n, trunc)
        g = cls(k, eye, eye, eye, eye, checked=False)
        object.__setattr__(g, "checked", True)  # trivially admissible
        return g

    @property
    def rank(self) -> int:
        return len(self.left)

    @property
    def trunc(self) -> int:
        return self.left[0][0].trunc

    def problems(self) -> list[str]:
        """Human-readable list of violated invariants; empty when admissible."""
        out = []
        shapes = set()
        for name in ("left", "left_inv", "right", "right_inv"):
            try:
                shapes.add(_check_square(getattr(self, name), name))
            except (DimensionMismatchError, InvariantError, TypeError) as exc:
                out.append(str(exc))
        if out:
            return out
        if len(shapes) != 1:
            return ["gauge matrices differ in size or truncation order"]
        n, trunc = shapes.pop()
        for name in ("left", "left_inv"):
            for r, row in enumerate(getattr(self, name)):
                for c, x in enumerate(row):
                    if not is_v_holomorphic(x, self.k):
                        out.append(f"{name}[{r + 1},{c + 1}] is not holomorphic on V")
        for name in ("right", "right_inv"):
            for r, row in enumerate(getattr(self, name)):
                for c, x in enumerate(row):
                    if not is_u_holomorphic(x):
                        out.append(f"{name}[{r + 1},{c + 1}] is not holomorphic on U")
        eye = jet_identity(n, trunc)
        for a, b in (("left", "left_inv"), ("right", "right_inv")):
            prod = mat_mul(getattr(self, a), getattr(self, b))
            bad = first_mismatch(prod, eye)
            if bad:
                r, c, u, z, got, want = bad
                out.append(f"{a}*{b} != I at entry ({r},{c}) term u^{u} z^{z}: "
                           f"got {got}, expected {want}")
        return out

    def is_identity(self) -> bool:
        eye = jet_identity(self.rank, self.trunc)
        return all(m == eye for m in (self.left, self.left_inv, self.right, self.right_inv))

    def then(self, other: GaugeTransform) -> GaugeTransform:
        """Gauge equal to applying ``self`` first and ``other`` second."""
        if (other.k, other.rank, other.trunc) != (self.k, self.rank, self.trunc):
            raise DimensionMismatchError("gauges differ in k, rank or truncation")
        return GaugeTransform(
            self.k,
            mat_mul(other.left, self.left),
            mat_mul(self.left_inv, other.left_inv),
            mat_mul(self.right, other.right),
            mat_mul(other.right_inv, self.right_inv),
            checked=self.checked and other.checked,
        )

    def inverse(self) -> GaugeTransform:
        return GaugeTransform(self.k, self.left_inv, self.left, self.right_inv,
                              self.right, checked=self.checked)


def apply_gauge(g: GaugeTransform, t: TransitionMatrix) -> TransitionMatrix:
    """left @ t @ right, truncated at the common u-order."""
    if g.rank != t.rank:
        raise DimensionMismatchError(f"gauge rank {g.rank} vs matrix rank {t.rank}")
    if g.k != t.k:
        raise DimensionMismatchError(f"gauge k={g.k} vs matrix k={t.k}")
    if g.trunc != t.trunc:
        raise DimensionMismatchError(f"gauge trunc={g.trunc} vs matrix trunc={t.trunc}")
    prod = mat_mul(mat_mul(g.left, t.entries), g.right)
    try:
        return TransitionMatrix(t.k, prod)
    except InvariantError as exc:
        raise InvariantError(f"gauge is not admissible, product fails: {exc}") from None


def gauge_det_is_one(g: GaugeTransform) -> bool:
    one = UJet.one(g.trunc)
    return det(g.left) == one and det(g.right) == one


class GaugeBuilder:
    """Accumulates a gauge from elementary factors, optionally updating a
    working matrix in place so that ``target == left @ T0 @ right`` holds
    after every step.
    """

    def __init__(self, n: int, k: int, trunc: int, target: Sequence[Sequence[UJet]] | None = None):
        self.n, self.k, self.trunc = n, k, trunc
        self.left = thaw(jet_identity(n, trunc))
        self.left_inv = thaw(jet_identity(n, trunc))
        self.right = thaw(jet_identity(n, trunc))
        self.right_inv = thaw(jet_identity(n, trunc))
        self.target = thaw(target) if target is not None else None
        self.steps = 0

    @staticmethod
    def _row_add(m, r, s, f):
        # row r += f * row s
        m[r] = [a + f * b for a, b in zip(m[r], m[s])]

    @staticmethod
    def _col_add(m, r, s, f):
        # col s += col r * f
        for row in m:
            row[s] = row[s] + row[r] * f

    def left_elementary(self, r: int, s: int, eta: UJet) -> None:
        """Left factor I + eta*E_rs (r != s)."""
        if r == s:
            raise ValueError("elementary factor needs r != s")
        if not eta:
            return
        self._row_add(self.left, r, s, eta)
        self._col_add(self.left_inv, r, s, -eta)
        if self.target is not None:
            self._row_add(self.target, r, s, eta)
        self.steps += 1

    def right_elementary(self, r: int, s: int, xi: UJet) -> None:
        """Right factor I + xi*E_rs (r != s)."""
        if r == s:
            raise ValueError("elementary factor needs r != s")
        if not xi:
            return
        self._col_add(self.right, r, s, xi)
        self._row_add(self.right_inv, r, s, -xi)
        if self.target is not None:
            self._col_add(self.target, r, s, xi)
        self.steps += 1

    def left_scale(self, r: int, unit: UJet, unit_inv: UJet) -> None:
        self.left[r] = [unit * a for a in self.left[r]]
        for row in self.left_inv:
            row[r] = row[r] * unit_inv
        if self.target is not None:
            self.target[r] = [unit * a for a in self.target[r]]
        self.steps += 1

    def right_scale(self, c: int, unit: UJet, unit_inv: UJet) -> None:
        for row in self.right:
            row[c] = row[c] * unit
        self.right_inv[c] = [unit_inv * a for a in self.right_inv[c]]
        if self.target is not None:
            for row in self.target:
                row[c] = row[c] * unit
        self.steps += 1

    def left_permute(self, order: Sequence[int]) -> None:
        """Left factor P with (P @ M)[t] = M[order[t]]."""
        self.left = [self.left[i] for i in order]
        self.left_inv = [[row[i] for i in order] for row in self.left_inv]
        if self.target is not None:
            self.target = [self.target[i] for i in order]
        self.steps += 1

    def right_permute(self, order: Sequence[int]) -> None:
        """Right factor Q with (M @ Q)[:, t] = M[:, order[t]]."""
        self.right = [[row[i] for i in order] for row in self.right]
        self.right_inv = [self.right_inv[i] for i in order]
        if self.target is not None:
            self.target = [[row[i] for i in order] for row in self.target]
        self.steps += 1

    def left_mul(self, m: Matrix, m_inv: Matrix) -> None:
        """Left factor m, given together with its inverse."""
        self.left = thaw(mat_mul(m, self.left))
        self.left_inv = thaw(mat_mul(self.left_inv, m_inv))
        if self.target is not None:
            self.target = thaw(mat_mul(m, self.target))
        self.steps += 1

    def right_mul(self, m: Matrix, m_inv: Matrix) -> None:
        """Right factor m, given together with its inverse."""
        self.right = thaw(mat_mul(self.right, m))
        self.right_inv = thaw(mat_mul(m_inv, self.right_inv))
        if self.target is not None:
            self.target = thaw(mat_mul(self.target, m))
        self.steps += 1

    def matrix(self) -> TransitionMatrix:
        return TransitionMatrix(self.k, self.target)

    def gauge(self, check: bool = True) -> GaugeTransform:
        return GaugeTransform(self.k, self.left, self.left_inv, self.right,
                              self.right_inv, checked=check)
