import pytest

from obk.ring import UJet, mpq
from obk.sections import ChartSection, line_section, vanishing_report, verify_cocycle

from conftest import jet


def test_k1_j1_section_trivializes():
    s = line_section(1, 1)
    assert s.s_U == jet(1, {(1, 0): 1})
    assert verify_cocycle(s)
    r = vanishing_report(s)
    assert r.trivializes_off_zero_section
    assert [c.zero_locus for c in r.charts] == [("u=0",), ("v=0",)]


def test_k2_j0_vanishes_on_fibre():
    s = line_section(2, 0)
    assert s.s_U == jet(1, {(1, 2): 1})
    assert verify_cocycle(s)
    r = vanishing_report(s)
    u_chart = r.charts[0]
    assert u_chart.holomorphic and "z=0" in u_chart.zero_locus
    assert not r.trivializes_off_zero_section


@pytest.mark.parametrize("k, j", [(1, 3), (1, 2)])
def test_negative_exponent_not_holomorphic(k, j):
    s = line_section(k, j)
    assert verify_cocycle(s)
    r = vanishing_report(s)
    assert not r.charts[0].holomorphic and r.charts[0].zero_locus is None
    assert r.charts[1].holomorphic


@pytest.mark.parametrize("k", range(1, 6))
@pytest.mark.parametrize("j", range(-5, 6))
def test_cocycle_everywhere(k, j):
    assert verify_cocycle(line_section(k, j))


def test_perturbed_section_breaks_cocycle():
    s = line_section(2, 1)
    bad = ChartSection(s.k, s.j, s.s_U.with_trunc(2) + UJet.monomial(1, 2, 0, 2), s.s_V)
    assert not verify_cocycle(bad)


def test_constant_section_of_trivial_bundle():
    s = ChartSection(1, 0, UJet.one(1), ((0, 0, mpq(1)),))
    assert verify_cocycle(s)
    assert vanishing_report(s).trivializes_off_zero_section


def test_report_lines_are_stable():
    assert vanishing_report(line_section(1, 1)).lines() == [
        "k=1 j=1", "cocycle=ok",
        "chart=U holomorphic=yes zero_locus=u=0",
        "chart=V holomorphic=yes zero_locus=v=0",
        "trivializes_off_zero_section=yes",
    ]
