"""Gauge normalization of transition matrices to the canonical algebraic form.

The pipeline runs four stages on a single working matrix, composing one gauge:

1. ``prepare_diagonal``: Birkhoff gauge making the u^0 part diag(z**j).
2. ``eliminate_lower``: unipotent lower-triangular gauges, chosen order by
   order in u, make every entry below the diagonal vanish.
3. ``normalize_diagonal``: diagonal unit gauges turn each diagonal entry
   z**j * (1 + u*h) into z**j.
4. ``reduce_upper``: unipotent upper-triangular gauges remove every term of
   an entry (r, s) outside its window, leaving z**l * u**i only for
   k*i + j_s < l < j_r.

At u-order n the correction for entry (r, s) only changes that entry at
order n (all other effects land at order n+1 or later), so one sweep over
the orders 1..N clears every targeted term.
"""

from __future__ import annotations

from dataclasses import dataclass

from obk.birkhoff import prepare_into
from obk.bundle import GaugeBuilder, GaugeTransform, SplittingType, TransitionMatrix, apply_gauge
from obk.errors import InternalError, InvariantError, PreconditionError, TruncationTooSmallError
from obk.matrix import Matrix, first_mismatch
from obk.ring import LaurentPoly, Scalar, UJet, jet_exp, jet_log, split_threshold


# -- windows -----------------------------------------------------------------

def window_max_degree(k: int, j_r: int, j_s: int) -> int:
    """Largest u-degree allowed in the (r, s) window, 0 when it is empty."""
    return max(0, (j_r - j_s - 2) // k)


def canonical_support(k: int, j_r: int, j_s: int) -> frozenset[tuple[int, int]]:
    """Monomials z**l * u**i that may survive in entry (r, s)."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    return frozenset((i, l)
                     for i in range(1, window_max_degree(k, j_r, j_s) + 1)
                     for l in range(k * i + j_s + 1, j_r))


def canonical_dim(k: int, j_r: int, j_s: int) -> int:
    """Number of free coefficients in entry (r, s) of the canonical form."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    m = window_max_degree(k, j_r, j_s)
    # sum over i = 1..m of (j_r - j_s - 1 - k*i)
    return m * (j_r - j_s - 1) - k * m * (m + 1) // 2


def in_window(k: int, j_r: int, j_s: int, i: int, l: int) -> bool:
    return 1 <= i and k * i + j_s < l < j_r


# -- types -------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualSplit:
    threshold: int
    eta_part: LaurentPoly
    xi_part: LaurentPoly


def split_residual(rho: LaurentPoly, threshold: int) -> ResidualSplit:
    low, high = split_threshold(rho, threshold)
    return ResidualSplit(threshold, low, high)


@dataclass(frozen=True)
class CanonicalForm:
    """Upper-triangular transition matrix with diagonal z**j and entries p.

    ``window_certified[r][s]`` says whether entry (r, s), r < s, lies in its
    window; other positions are reported as True.
    """

    k: int
    exponents: SplittingType
    p: Matrix
    window_certified: tuple[tuple[bool, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def trunc(self) -> int:
        return self.p[0][0].trunc

    @classmethod
    def from_matrix(cls, t: TransitionMatrix) -> CanonicalForm:
        """Read off a canonical form; raises InvariantError on the wrong shape."""
        n, N = t.rank, t.trunc
        exps = []
        for i in range(n):
            d = t.entries[i][i]
            if any(d.coeffs[1:]) or not d.coeffs[0].is_monomial() \
                    or d.coeffs[0].as_monomial()[0] != 1:
                raise InvariantError(f"diagonal entry {i + 1} is {d}, not a power of z")
            exps.append(d.coeffs[0].min_exp)
            for c in range(i):
                if t.entries[i][c]:
                    raise InvariantError(f"entry ({i + 1},{c + 1}) below the diagonal is nonzero")
        st = SplittingType(tuple(exps))
        zero = UJet.zero(N)
        p = tuple(tuple(t.entries[r][s] if s > r else zero for s in range(n))
                  for r in range(n))
        cert = tuple(tuple(s <= r or _entry_in_window(t.k, exps[r], exps[s], p[r][s])
                           for s in range(n)) for r in range(n))
        return cls(t.k, st, p, cert)

    def matrix(self) -> TransitionMatrix:
        n, N = self.rank, self.trunc
        rows = []
        for r in range(n):
            row = list(self.p[r])
            row[r] = UJet.monomial(1, 0, self.exponents.exponents[r], N)
            rows.append(row)
        return TransitionMatrix(self.k, rows)

    def support(self, r: int, s: int) -> frozenset[tuple[int, int]]:
        """(u-degree, z-exponent) pairs present in entry (r, s), 0-based."""
        return frozenset((i, l) for i, l, _ in self.p[r][s].terms())

    def all_certified(self) -> bool:
        return all(all(row) for row in self.window_certified)

    def is_polynomial(self) -> bool:
        """True when every entry has only nonnegative powers of z."""
        return all(l >= 0 for row in self.p for x in row for _, l, _ in x.terms())

    def is_split(self) -> bool:
        return not any(x for row in self.p for x in row)


def _entry_in_window(k: int, j_r: int, j_s: int, f: UJet) -> bool:
    return all(in_window(k, j_r, j_s, i, l) for i, l, _ in f.terms())


# -- stage helpers -----------------------------------------------------------

def _diag_u0(target, require_unit_coeff: bool = False) -> list[tuple[Scalar, int]]:
    n = len(target)
    out = []
    for i in range(n):
        lead = target[i][i].coeffs[0]
        if not lead.is_monomial():
            raise PreconditionError(f"diagonal entry {i + 1} has u^0 part {lead}, not a monomial")
        c, j = lead.as_monomial()
        if require_unit_coeff and c != 1:
            raise PreconditionError(f"diagonal entry {i + 1} has u^0 coefficient {c}, not 1")
        out.append((c, j))
    return out


def _check_descending(exps) -> None:
    if any(a < b for a, b in zip(exps, exps[1:])):
        raise PreconditionError(f"diagonal exponents {tuple(exps)} are not descending")


def _check_lower_zero(target) -> None:
    for r in range(len(target)):
        for s in range(r):
            if target[r][s]:
                raise PreconditionError(f"entry ({r + 1},{s + 1}) below the diagonal is nonzero")


def _single(f: LaurentPoly, n: int, N: int) -> UJet:
    coeffs = [LaurentPoly.zero()] * (N + 1)
    coeffs[n] = f
    return UJet(N, coeffs)


def _eliminate_lower_into(b: GaugeBuilder) -> None:
    n, N = b.n, b.trunc
    t = b.target
    for r in range(n):
        for s in range(n):
            if r != s and t[r][s].coeffs[0]:
                raise PreconditionError("u^0 part is not diagonal; run prepare_diagonal first")
    diag = _diag_u0(t)
    _check_descending([j for _, j in diag])
    for _sweep in range(N + 1):
        for order in range(1, N + 1):
            for dist in range(1, n):
                for s in range(n - dist):
                    r = s + dist
                    rho = b.target[r][s].coeffs[order]
                    if not rho:
                        continue
                    (c_r, j_r), (c_s, j_s) = diag[r], diag[s]
                    # rho + eta*c_s*z^j_s + xi*c_r*z^j_r = 0, split at j_r <= j_s
                    split = split_residual(rho, j_r)
                    eta = (split.eta_part * (-1 / c_s)).shift(-j_s)
                    xi = (split.xi_part * (-1 / c_r)).shift(-j_r)
                    b.left_elementary(r, s, _single(eta, order, N))
                    b.right_elementary(r, s, _single(xi, order, N))
        if all(not b.target[r][s] for r in range(n) for s in range(r)):
            return
    raise InternalError("lower-triangular residual survived every sweep")


def _normalize_diagonal_into(b: GaugeBuilder) -> None:
    n, N = b.n, b.trunc
    _check_lower_zero(b.target)
    diag = _diag_u0(b.target)
    for i, (c, j) in enumerate(diag):
        unit = (b.target[i][i] * (1 / c)).shift_z(-j)
        g = jet_log(unit)
        g_u = UJet(N, (split_threshold(f, -1)[1] for f in g.coeffs))
        g_v = g - g_u
        if c != 1 or g_v:
            b.left_scale(i, jet_exp(-g_v) * (1 / c), jet_exp(g_v) * c)
        if g_u:
            b.right_scale(i, jet_exp(-g_u), jet_exp(g_u))
        want = UJet.monomial(1, 0, j, N)
        if b.target[i][i] != want:
            raise InternalError(f"diagonal entry {i + 1} is {b.target[i][i]} after normalization")


def _reduce_upper_into(b: GaugeBuilder, k: int) -> None:
    n, N = b.n, b.trunc
    t = b.target
    _check_lower_zero(t)
    exps = []
    for i, (_, j) in enumerate(_diag_u0(t, require_unit_coeff=True)):
        if t[i][i] != UJet.monomial(1, 0, j, N):
            raise PreconditionError(f"diagonal entry {i + 1} is {t[i][i]}, not exactly z^{j}")
        exps.append(j)
    _check_descending(exps)
    for r in range(n):
        for s in range(r + 1, n):
            if t[r][s].coeffs[0]:
                raise PreconditionError(f"entry ({r + 1},{s + 1}) is not a multiple of u")
    _check_truncation(k, exps, N)
    for _sweep in range(N + 1):
        for order in range(1, N + 1):
            for dist in range(1, n):
                for r in range(n - dist):
                    s = r + dist
                    rho = b.target[r][s].coeffs[order]
                    if not rho:
                        continue
                    j_r, j_s = exps[r], exps[s]
                    # rho + eta*z^j_s + xi*z^j_r; eta reaches l <= j_s + k*order,
                    # xi reaches l >= j_r, the window in between stays
                    low, rest = split_threshold(rho, j_s + k * order)
                    _, high = split_threshold(rest, j_r - 1)
                    if low:
                        b.left_elementary(r, s, _single((-low).shift(-j_s), order, N))
                    if high:
                        b.right_elementary(r, s, _single((-high).shift(-j_r), order, N))
        if all(_entry_in_window(k, exps[r], exps[s], b.target[r][s])
               for r in range(n) for s in range(r + 1, n)):
            return
    if n == 2:
        raise InternalError("out-of-window terms survived every sweep")
    # rank >= 3: certification is reported per entry by CanonicalForm


def _check_truncation(k: int, exps, N: int) -> None:
    need = max((window_max_degree(k, exps[r], exps[s])
                for r in range(len(exps)) for s in range(r + 1, len(exps))), default=0)
    if N < need:
        raise TruncationTooSmallError(
            f"truncation order {N} is below the largest window u-degree {need}")


# -- public stages -----------------------------------------------------------

def eliminate_lower(t: TransitionMatrix) -> tuple[TransitionMatrix, GaugeTransform]:
    """Clear everything below the diagonal; needs u^0 part diag(z**j), j descending."""
    b = GaugeBuilder(t.rank, t.k, t.trunc, target=t.entries)
    _eliminate_lower_into(b)
    return b.matrix(), b.gauge()


def normalize_diagonal(t: TransitionMatrix) -> tuple[TransitionMatrix, GaugeTransform]:
    """Make an upper-triangular t have diagonal exactly z**j_i."""
    b = GaugeBuilder(t.rank, t.k, t.trunc, target=t.entries)
    _normalize_diagonal_into(b)
    return b.matrix(), b.gauge()


def reduce_upper(t: TransitionMatrix) -> tuple[CanonicalForm, GaugeTransform]:
    b = GaugeBuilder(t.rank, t.k, t.trunc, target=t.entries)
    _reduce_upper_into(b, t.k)
    cf = CanonicalForm.from_matrix(b.matrix())
    if cf.rank == 2 and not cf.all_certified():
        raise InternalError("reduced matrix has an entry outside its window")
    return cf, b.gauge()


def normalize(t: TransitionMatrix) -> tuple[CanonicalForm, GaugeTransform]:
    """Full pipeline; the returned gauge carries t exactly to the canonical matrix."""
    b = GaugeBuilder(t.rank, t.k, t.trunc, target=t.entries)
    exps = prepare_into(b)
    _check_truncation(t.k, exps, t.trunc)
    _eliminate_lower_into(b)
    _normalize_diagonal_into(b)
    _reduce_upper_into(b, t.k)
    cf = CanonicalForm.from_matrix(b.matrix())
    gauge = b.gauge()
    if cf.rank == 2 and not cf.all_certified():
        raise InternalError("normalized matrix has an entry outside its window")
    bad = first_mismatch(apply_gauge(gauge, t).entries, cf.matrix().entries)
    if bad:
        raise InternalError(f"composed gauge does not reproduce the canonical matrix: {bad}")
    return cf, gauge


def required_trunc(t: TransitionMatrix, exponents=None) -> int:
    """Default working order: max(input u-degree, largest window degree) + 2."""
    if exponents is None:
        from obk.birkhoff import splitting_type
        exponents = splitting_type(t).exponents
    exps = list(exponents)
    need = max((window_max_degree(t.k, exps[r], exps[s])
                for r in range(len(exps)) for s in range(r + 1, len(exps))), default=0)
    return max(t.max_u_degree(), need) + 2
