"""Exact arithmetic on Laurent polynomials in z and u-jets over the rationals.

A ``UJet`` of truncation order N is a polynomial in u of degree <= N whose
coefficients are Laurent polynomials in z, with every u-degree above N
discarded.  These are the functions on the overlap U∩V of the two charts
(z, u) and (xi, v) = (1/z, z^k u) of the total space of O(-k), kept to a
finite order in u.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

from gmpy2 import mpq

from obk.errors import BadConstantTermError, NotAUnitError, OrderMismatchError

# exact rational in lowest terms with positive denominator
Scalar = type(mpq())
NUMBER_TYPES = (int, Fraction, Scalar)

_ZERO = mpq(0)
_ONE = mpq(1)


def as_scalar(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, str, Fraction)) and not isinstance(value, bool):
        return mpq(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


class LaurentPoly:
    """Finite sum of c * z**e with rational c and integer e.

    Immutable.  Zero coefficients are never stored, and terms are kept in
    ascending exponent order, so two equal polynomials compare and hash equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Scalar] = {}
        for e, c in items:
            c = as_scalar(c)
            if c:
                e = int(e)
                acc[e] = acc.get(e, _ZERO) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e]}
        self._hash = None

    @classmethod
    def _raw(cls, d: dict[int, Scalar]) -> LaurentPoly:
        # d must already be free of zeros
        obj = cls.__new__(cls)
        obj._terms = {e: d[e] for e in sorted(d)}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> LaurentPoly:
        return _LP_ZERO

    @classmethod
    def one(cls) -> LaurentPoly:
        return _LP_ONE

    @classmethod
    def monomial(cls, coeff, exp: int) -> LaurentPoly:
        return cls({exp: coeff})

    # -- inspection --------------------------------------------------------

    def terms(self) -> tuple[tuple[int, Scalar], ...]:
        return tuple(self._terms.items())

    def __iter__(self) -> Iterator[tuple[int, Scalar]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, exp: int) -> Scalar:
        return self._terms.get(exp, _ZERO)

    def exponents(self) -> tuple[int, ...]:
        return tuple(self._terms)

    @property
    def min_exp(self) -> int | None:
        return next(iter(self._terms)) if self._terms else None

    @property
    def max_exp(self) -> int | None:
        return next(reversed(self._terms)) if self._terms else None

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def as_monomial(self) -> tuple[Scalar, int]:
        """Return (c, e) for c*z**e; raises ValueError otherwise."""
        if len(self._terms) != 1:
            raise ValueError(f"{self} is not a monomial")
        (e, c), = self._terms.items()
        return c, e

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            if isinstance(other, NUMBER_TYPES):
                other = LaurentPoly({0: other})
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        d = dict(self._terms)
        for e, c in other._terms.items():
            s = d.get(e, _ZERO) + c
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return LaurentPoly._raw(d)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        if isinstance(other, NUMBER_TYPES):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, NUMBER_TYPES):
            c0 = as_scalar(other)
            if not c0:
                return _LP_ZERO
            return LaurentPoly._raw({e: c * c0 for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return _LP_ZERO
        d: dict[int, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                d[e] = d.get(e, _ZERO) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in d.items() if c})

    __rmul__ = __mul__

    def shift(self, m: int) -> LaurentPoly:
        """Multiply by z**m."""
        if m == 0:
            return self
        return LaurentPoly._raw({e + m: c for e, c in self._terms.items()})

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_monomial():
                raise NotAUnitError(f"{self} is not a monomial, so it has no inverse")
            c, e = self.as_monomial()
            return LaurentPoly({e * n: c ** n})
        out = _LP_ONE
        for _ in range(n):
            out = out * self
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, NUMBER_TYPES):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)!r})"

    def __str__(self) -> str:
        return format_laurent(self)


_LP_ZERO = LaurentPoly()
_LP_ONE = LaurentPoly({0: 1})


def _format_monomial(c: Scalar, factors: list[str]) -> str:
    body = "*".join(factors)
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def _power(var: str, e: int) -> list[str]:
    if e == 0:
        return []
    if e == 1:
        return [var]
    return [f"{var}^{e}"]


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def format_laurent(f: LaurentPoly) -> str:
    return _join_terms([_format_monomial(c, _power("z", e)) for e, c in f])


def split_threshold(f: LaurentPoly, t: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Split f into (terms with exponent <= t, terms with exponent > t)."""
    low = {e: c for e, c in f if e <= t}
    high = {e: c for e, c in f if e > t}
    return LaurentPoly._raw(low), LaurentPoly._raw(high)


class UJet:
    """Polynomial in u modulo u**(trunc+1) with LaurentPoly coefficients.

    Binary operations require equal truncation orders; use ``with_trunc`` to
    change the order explicitly.
    """

    __slots__ = ("trunc", "coeffs", "_hash")

    def __init__(self, trunc: int, coeffs: Iterable[LaurentPoly] | None = None):
        if trunc < 0:
            raise ValueError("truncation order must be >= 0")
        if coeffs is None:
            coeffs = (_LP_ZERO,) * (trunc + 1)
        else:
            coeffs = tuple(coeffs)
            if len(coeffs) != trunc + 1:
                raise ValueError(
                    f"expected {trunc + 1} u-coefficients, got {len(coeffs)}")
            for c in coeffs:
                if not isinstance(c, LaurentPoly):
                    raise TypeError("u-coefficients must be LaurentPoly")
        self.trunc = trunc
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def zero(cls, trunc: int) -> UJet:
        return cls(trunc)

    @classmethod
    def one(cls, trunc: int) -> UJet:
        return cls.constant(_LP_ONE, trunc)

    @classmethod
    def constant(cls, f: LaurentPoly | int | Scalar, trunc: int) -> UJet:
        """The jet whose only coefficient is f at u-degree 0."""
        if not isinstance(f, LaurentPoly):
            f = LaurentPoly({0: f})
        return cls(trunc, (f,) + (_LP_ZERO,) * trunc)

    @classmethod
    def monomial(cls, coeff, u: int, z: int, trunc: int) -> UJet:
        return cls.from_terms(trunc, {(u, z): coeff})

    @classmethod
    def from_terms(cls, trunc: int, terms: Mapping[tuple[int, int], object]
                   | Iterable[tuple[int, int, object]]) -> UJet:
        """Build from {(u, z): c} or an iterable of (u, z, c).

        A term of u-degree above ``trunc`` is an error, never dropped.
        """
        if isinstance(terms, Mapping):
            items = [(u, z, c) for (u, z), c in terms.items()]
        else:
            items = list(terms)
        per_u: list[list[tuple[int, object]]] = [[] for _ in range(trunc + 1)]
        for u, z, c in items:
            if u < 0 or u > trunc:
                raise ValueError(f"u-degree {u} outside 0..{trunc}")
            per_u[u].append((z, c))
        return cls(trunc, (LaurentPoly(t) for t in per_u))

    # -- inspection --------------------------------------------------------

    def __getitem__(self, i: int) -> LaurentPoly:
        return self.coeffs[i]

    def terms(self) -> list[tuple[int, int, Scalar]]:
        """All (u, z, c) sorted by (u, z) ascending."""
        return [(i, e, c) for i, f in enumerate(self.coeffs) for e, c in f]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    @property
    def u_valuation(self) -> int | None:
        for i, f in enumerate(self.coeffs):
            if f:
                return i
        return None

    @property
    def u_degree(self) -> int | None:
        for i in range(self.trunc, -1, -1):
            if self.coeffs[i]:
                return i
        return None

    def with_trunc(self, trunc: int) -> UJet:
        """Pad with zeros or drop u-degrees above ``trunc``."""
        if trunc == self.trunc:
            return self
        if trunc > self.trunc:
            return UJet(trunc, self.coeffs + (_LP_ZERO,) * (trunc - self.trunc))
        return UJet(trunc, self.coeffs[: trunc + 1])

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: UJet) -> None:
        if other.trunc != self.trunc:
            raise OrderMismatchError(
                f"truncation orders differ: {self.trunc} vs {other.trunc}")

    def __add__(self, other) -> UJet:
        if isinstance(other, NUMBER_TYPES + (LaurentPoly,)):
            other = UJet.constant(other, self.trunc)
        if not isinstance(other, UJet):
            return NotImplemented
        self._check(other)
        return UJet(self.trunc, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> UJet:
        return UJet(self.trunc, (-a for a in self.coeffs))

    def __sub__(self, other) -> UJet:
        if isinstance(other, NUMBER_TYPES + (LaurentPoly,)):
            other = UJet.constant(other, self.trunc)
        if not isinstance(other, UJet):
            return NotImplemented
        self._check(other)
        return UJet(self.trunc, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> UJet:
        return (-self) + other

    def __mul__(self, other) -> UJet:
        if isinstance(other, NUMBER_TYPES + (LaurentPoly,)):
            return UJet(self.trunc, (a * other for a in self.coeffs))
        if not isinstance(other, UJet):
            return NotImplemented
        return jet_mul(self, other)

    __rmul__ = __mul__

    def shift_z(self, m: int) -> UJet:
        """Multiply by z**m."""
        return UJet(self.trunc, (a.shift(m) for a in self.coeffs))

    def mul_term(self, f: LaurentPoly, n: int) -> UJet:
        """Multiply by f * u**n, dropping u-degrees above trunc."""
        N = self.trunc
        out = [_LP_ZERO] * (N + 1)
        for i in range(0, N + 1 - n):
            if self.coeffs[i]:
                out[i + n] = self.coeffs[i] * f
        return UJet(N, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, UJet):
            return self.trunc == other.trunc and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.trunc, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"UJet({self.trunc}, {format_jet(self)!r})"

    def __str__(self) -> str:
        return format_jet(self)


def format_jet(f: UJet) -> str:
    parts = [_format_monomial(c, _power("z", e) + _power("u", i))
             for i, e, c in f.terms()]
    return _join_terms(parts)


def jet_mul(a: UJet, b: UJet) -> UJet:
    """Product of two jets truncated at their common order."""
    a._check(b)
    N = a.trunc
    nz_b = [(j, g) for j, g in enumerate(b.coeffs) if g]
    acc: list[LaurentPoly] = [_LP_ZERO] * (N + 1)
    for i, f in enumerate(a.coeffs):
        if not f:
            continue
        for j, g in nz_b:
            if i + j > N:
                break
            acc[i + j] = acc[i + j] + f * g
    return UJet(N, acc)


def _tail(a: UJet) -> UJet:
    return UJet(a.trunc, (_LP_ZERO,) + a.coeffs[1:])


def jet_invert(a: UJet) -> UJet:
    """Inverse of a unit jet (u^0 coefficient a nonzero monomial)."""
    lead = a.coeffs[0]
    if not lead.is_monomial():
        raise NotAUnitError(f"u^0 coefficient {lead} is not a nonzero monomial")
    c, e = lead.as_monomial()
    inv_lead = LaurentPoly._raw({-e: 1 / c})
    # a = lead * (1 + w) with w of u-valuation >= 1
    w = _tail(a) * inv_lead
    total = UJet.one(a.trunc)
    power = UJet.one(a.trunc)
    for n in range(1, a.trunc + 1):
        power = -(power * w)
        if not power:
            break
        total = total + power
    return total * inv_lead


def jet_log(a: UJet) -> UJet:
    """Formal logarithm of a jet with u^0 coefficient exactly 1."""
    if a.coeffs[0] != _LP_ONE:
        raise BadConstantTermError(f"jet_log needs u^0 coefficient 1, got {a.coeffs[0]}")
    w = _tail(a)
    total = UJet.zero(a.trunc)
    power = UJet.one(a.trunc)
    for n in range(1, a.trunc + 1):
        power = power * w
        if not power:
            break
        total = total + power * mpq((-1) ** (n + 1), n)
    return total


def jet_exp(a: UJet) -> UJet:
    """Formal exponential of a jet with u^0 coefficient 0."""
    if a.coeffs[0]:
        raise BadConstantTermError(f"jet_exp needs u^0 coefficient 0, got {a.coeffs[0]}")
    total = UJet.one(a.trunc)
    power = UJet.one(a.trunc)
    for n in range(1, a.trunc + 1):
        power = power * a
        if not power:
            break
        total = total + power * mpq(1, factorial(n))
    return total


def is_u_holomorphic(f: UJet) -> bool:
    """True when every z-exponent is >= 0, i.e. f is regular on chart U."""
    return all(e >= 0 for c in f.coeffs for e in c.exponents())


def is_v_holomorphic(f: UJet, k: int) -> bool:
    """True when the u^i coefficient has z-exponents <= k*i for every i.

    Since z**l * u**i = xi**(k*i - l) * v**i, this is regularity on chart V.
    """
    for i, c in enumerate(f.coeffs):
        if c and c.max_exp > k * i:
            return False
    return True
