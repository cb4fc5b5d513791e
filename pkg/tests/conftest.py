import pytest

from obk.bundle import TransitionMatrix
from obk.ring import LaurentPoly, UJet


def lp(terms):
    return LaurentPoly(terms)


def jet(N, terms):
    """Jet from {(u, z): c}."""
    return UJet.from_terms(N, terms)


def tm(k, N, rows):
    """TransitionMatrix from nested lists of {(u, z): c} dicts."""
    return TransitionMatrix(k, tuple(tuple(jet(N, e) for e in row) for row in rows))


@pytest.fixture
def diag31():
    return tm(1, 3, [[{(0, 3): 1}, {}], [{}, {(0, 0): 1}]])
