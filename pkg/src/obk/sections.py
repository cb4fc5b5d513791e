"""Explicit sections of line bundles on M_k, checked chart by chart.

A line bundle with transition function z**j has sections given by a pair
(s_U, s_V) with z**j * s_U = s_V on the overlap.  The section
z**(k-j) * u on U, v on V satisfies this for every j; whether it is
holomorphic and nonvanishing off the zero section is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from obk.ring import Scalar, UJet, is_u_holomorphic, mpq


@dataclass(frozen=True)
class ChartSection:
    """Section of the line bundle with transition z**j.

    ``s_V`` holds terms (a, b, c) meaning c * xi**a * v**b in chart V.
    """

    k: int
    j: int
    s_U: UJet
    s_V: tuple[tuple[int, int, Scalar], ...]

    def s_V_on_overlap(self) -> UJet | None:
        """s_V rewritten in (z, u) through xi = 1/z, v = z**k * u.

        None when a v-degree exceeds the truncation order of s_U.
        """
        N = self.s_U.trunc
        terms: dict[tuple[int, int], Scalar] = {}
        for a, b, c in self.s_V:
            if b > N or b < 0:
                return None
            key = (b, self.k * b - a)
            terms[key] = terms.get(key, mpq(0)) + mpq(c)
        return UJet.from_terms(N, terms)


def line_section(k: int, j: int) -> ChartSection:
    """The section z**(k-j) * u on U, v on V."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return ChartSection(k, j, UJet.monomial(1, 1, k - j, 1), ((0, 1, mpq(1)),))


def verify_cocycle(s: ChartSection) -> bool:
    """z**j * s_U == s_V on U∩V, as exact jets."""
    rhs = s.s_V_on_overlap()
    return rhs is not None and s.s_U.shift_z(s.j) == rhs


@dataclass(frozen=True)
class ChartReport:
    chart: str
    holomorphic: bool
    # zero-locus components among the coordinate axes; "other" marks a
    # factor that is not a monomial; None when not holomorphic
    zero_locus: tuple[str, ...] | None

    @property
    def nonvanishing_off_zero_section(self) -> bool:
        axis = "u=0" if self.chart == "U" else "v=0"
        return self.holomorphic and set(self.zero_locus) <= {axis}


@dataclass(frozen=True)
class VanishingReport:
    k: int
    j: int
    cocycle: bool
    charts: tuple[ChartReport, ChartReport]

    @property
    def trivializes_off_zero_section(self) -> bool:
        return self.cocycle and all(c.nonvanishing_off_zero_section for c in self.charts)

    def lines(self) -> list[str]:
        out = [f"k={self.k} j={self.j}", f"cocycle={'ok' if self.cocycle else 'FAIL'}"]
        for c in self.charts:
            locus = "n/a" if c.zero_locus is None else (",".join(c.zero_locus) or "empty")
            out.append(f"chart={c.chart} holomorphic={'yes' if c.holomorphic else 'no'} "
                       f"zero_locus={locus}")
        out.append("trivializes_off_zero_section="
                   + ("yes" if self.trivializes_off_zero_section else "no"))
        return out


def _monomial_locus(exps: list[tuple[int, int]], names: tuple[str, str]) -> tuple[str, ...]:
    # exps: (first-variable exponent, second-variable exponent) per term
    if not exps:
        return ("everywhere",)
    m1 = min(a for a, _ in exps)
    m2 = min(b for _, b in exps)
    out = []
    if m1 > 0:
        out.append(names[0])
    if m2 > 0:
        out.append(names[1])
    # a nonconstant polynomial cofactor vanishes somewhere else in C^2
    if len(exps) > 1:
        out.append("other")
    return tuple(out)


def vanishing_report(s: ChartSection) -> VanishingReport:
    u_hol = is_u_holomorphic(s.s_U)
    u_locus = None
    if u_hol:
        u_locus = _monomial_locus([(z, u) for u, z, _ in s.s_U.terms()], ("z=0", "u=0"))
    v_terms = [(a, b) for a, b, c in s.s_V if c]
    v_hol = all(a >= 0 and b >= 0 for a, b in v_terms)
    v_locus = _monomial_locus(v_terms, ("xi=0", "v=0")) if v_hol else None
    return VanishingReport(s.k, s.j, verify_cocycle(s),
                           (ChartReport("U", u_hol, u_locus), ChartReport("V", v_hol, v_locus)))
