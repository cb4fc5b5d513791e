from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from obk.errors import BadConstantTermError, NotAUnitError, OrderMismatchError
from obk.ring import (
    LaurentPoly, UJet, is_u_holomorphic, is_v_holomorphic, jet_exp, jet_invert, jet_log,
    jet_mul, mpq, split_threshold,
)

from conftest import jet, lp


def test_laurent_basic_arithmetic():
    f = lp({-1: 1, 0: 1, 3: 1})
    g = lp({1: 2})
    assert f * g == lp({0: 2, 1: 2, 4: 2})
    assert f - f == LaurentPoly.zero()
    assert (g ** -1) == lp({-1: Fraction(1, 2)})
    assert f.min_exp == -1 and f.max_exp == 3
    assert lp({2: 0}) == LaurentPoly.zero()


def test_non_monomial_negative_power_rejected():
    with pytest.raises(NotAUnitError):
        lp({0: 1, 1: 1}) ** -1


def test_jet_mul_examples():
    assert jet_mul(jet(2, {(0, 0): 1, (1, 1): 1}), jet(2, {(0, 0): 1, (1, 1): -1})) == \
        jet(2, {(0, 0): 1, (2, 2): -1})
    assert jet_mul(jet(0, {(0, 3): 1}), jet(0, {(0, -3): 1})) == UJet.one(0)
    assert jet_mul(jet(2, {(0, 0): 1, (1, 0): 1}), jet(2, {(0, 0): 1, (1, 0): 1, (2, 0): 1})) == \
        jet(2, {(0, 0): 1, (1, 0): 2, (2, 0): 2})


def test_jet_mul_order_mismatch():
    with pytest.raises(OrderMismatchError):
        jet_mul(UJet.one(2), UJet.one(3))


def test_jet_invert_examples():
    assert jet_invert(jet(2, {(0, 3): 1})) == jet(2, {(0, -3): 1})
    assert jet_invert(jet(2, {(0, 0): 1, (1, 0): 1})) == jet(2, {(0, 0): 1, (1, 0): -1, (2, 0): 1})
    assert jet_invert(jet(1, {(0, 1): 1, (1, 2): 1})) == jet(1, {(0, -1): 1, (1, 0): -1})


@pytest.mark.parametrize("terms", [{(0, 0): 1, (0, 1): 1}, {(1, 0): 1}, {}])
def test_jet_invert_rejects_non_units(terms):
    with pytest.raises(NotAUnitError):
        jet_invert(jet(2, terms))


def test_log_exp_examples():
    assert jet_log(jet(2, {(0, 0): 1, (1, 0): 1})) == jet(2, {(1, 0): 1, (2, 0): Fraction(-1, 2)})
    for N in range(4):
        assert jet_exp(UJet.zero(N)) == UJet.one(N)
    f = jet(2, {(0, 0): 1, (1, 1): 1, (2, 0): 1})
    assert jet_exp(jet_log(f)) == f


def test_log_exp_preconditions():
    with pytest.raises(BadConstantTermError):
        jet_log(jet(2, {(0, 0): 2}))
    with pytest.raises(BadConstantTermError):
        jet_exp(jet(2, {(0, 0): 1}))


def test_holomorphy_examples():
    assert is_u_holomorphic(jet(3, {(1, 2): 1}))
    assert not is_u_holomorphic(jet(3, {(1, -1): 1}))
    assert is_u_holomorphic(jet(3, {(0, 0): 1, (1, 1): 1, (3, 5): 1}))
    assert is_v_holomorphic(jet(3, {(1, -2): 1}), 1)
    assert not is_v_holomorphic(jet(3, {(1, 2): 1}), 1)
    assert is_v_holomorphic(jet(3, {(1, 3): 1}), 3)


def test_split_threshold_examples():
    assert split_threshold(lp({-1: 1, 0: 1, 3: 1}), 0) == (lp({-1: 1, 0: 1}), lp({3: 1}))
    assert split_threshold(LaurentPoly.zero(), 7) == (LaurentPoly.zero(), LaurentPoly.zero())
    assert split_threshold(lp({2: 5}), 2) == (lp({2: 5}), LaurentPoly.zero())


def test_with_trunc_pads_and_truncates():
    f = jet(2, {(0, 0): 1, (2, 1): 3})
    assert f.with_trunc(4).with_trunc(2) == f
    assert f.with_trunc(1) == jet(1, {(0, 0): 1})


def test_from_terms_rejects_high_u():
    with pytest.raises(ValueError):
        jet(1, {(2, 0): 1})


def test_coefficients_are_exact():
    f = jet(1, {(0, 0): Fraction(1, 3)}) * 3
    assert f == UJet.one(1)
    assert isinstance(f[0].coeff(0), type(mpq()))


# -- properties ------------------------------------------------------------------

N = 3
coeff = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
laurent = st.dictionaries(st.integers(-3, 3), coeff, max_size=4).map(LaurentPoly)
jets = st.lists(laurent, min_size=N + 1, max_size=N + 1).map(lambda cs: UJet(N, cs))
nonzero = st.sampled_from([-3, -2, -1, 1, 2, 3])


def unit(c, e, tail):
    return UJet.monomial(c, 0, e, N) + (tail - UJet.constant(tail[0], N))


units = st.builds(unit, nonzero, st.integers(-3, 3), jets)


@settings(max_examples=60, deadline=None)
@given(jets, jets, jets)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == UJet.zero(N)


@settings(max_examples=60, deadline=None)
@given(units)
def test_invert_is_two_sided(a):
    inv = jet_invert(a)
    assert a * inv == UJet.one(N) == inv * a


@settings(max_examples=40, deadline=None)
@given(jets)
def test_log_exp_round_trip(g):
    g = g - UJet.constant(g[0], N)
    assert jet_log(jet_exp(g)) == g
    one_plus = UJet.one(N) + g
    assert jet_exp(jet_log(one_plus)) == one_plus


@settings(max_examples=40, deadline=None)
@given(jets, jets)
def test_exp_is_a_homomorphism(a, b):
    a = a - UJet.constant(a[0], N)
    b = b - UJet.constant(b[0], N)
    assert jet_exp(a + b) == jet_exp(a) * jet_exp(b)


@given(laurent, st.integers(-4, 4))
def test_split_recombines(f, t):
    low, high = split_threshold(f, t)
    assert low + high == f
    assert all(e <= t for e in low.exponents()) and all(e > t for e in high.exponents())


@settings(max_examples=60, deadline=None)
@given(jets, jets, st.integers(1, 3))
def test_holomorphy_closed_under_ring_ops(a, b, k):
    def to_u(f):
        return UJet(N, (split_threshold(c, -1)[1] for c in f.coeffs))

    def to_v(f):
        return UJet(N, (split_threshold(c, k * i)[0] for i, c in enumerate(f.coeffs)))

    ua, ub, va, vb = to_u(a), to_u(b), to_v(a), to_v(b)
    assert is_u_holomorphic(ua) and is_v_holomorphic(va, k)
    assert is_u_holomorphic(ua * ub) and is_u_holomorphic(ua + ub)
    assert is_v_holomorphic(va * vb, k) and is_v_holomorphic(va - vb, k)
