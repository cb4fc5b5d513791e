import pytest

from obk.bundle import GaugeTransform, apply_gauge
from obk.fileio import write_bundle, write_gauge
from obk.harness import (
    RandomSpec, fuzz_seed, fuzz_spec, random_bundle, random_canonical, random_gauge, roundtrip_check,
)
from obk.matrix import jet_identity, mat_mul, thaw, freeze
from obk.normal_form import CanonicalForm

from conftest import tm


def test_generators_are_deterministic():
    spec = RandomSpec(1, 1, 2, 3, exponents=(3, 0), ops=3)
    assert write_bundle(random_bundle(spec)) == write_bundle(random_bundle(spec))
    assert write_gauge(random_gauge(spec)) == write_gauge(random_gauge(spec))
    assert random_canonical(spec) == random_canonical(spec)
    assert fuzz_spec(7, 2) == fuzz_spec(7, 2)


def test_different_seeds_differ():
    texts = {write_bundle(random_bundle(RandomSpec(s, 1, 2, 3, exponents=(4, 0), ops=4)))
             for s in range(10)}
    assert len(texts) > 1


def test_stored_inverse_undoes_gauge():
    spec = RandomSpec(3, 2, 3, 4, exponents=(5, 2, 0))
    g = random_gauge(spec)
    t = random_bundle(spec)
    assert apply_gauge(g.inverse(), apply_gauge(g, t)) == t
    assert mat_mul(g.right, g.right_inv) == jet_identity(3, 4)


def test_fuzz_spec_bounds():
    for seed in range(100):
        spec = fuzz_spec(seed, 1 + seed % 3)
        j1, j2 = spec.exponents
        assert 0 <= j1 - j2 <= 8 and spec.trunc <= 12


def test_split_canonical_passes():
    spec = RandomSpec(0, 1, 2, 3, exponents=(1, 0))
    v = roundtrip_check(random_canonical(spec), spec)
    assert v.passed and v.canonical.is_split()


def test_window_canonical_fifty_seeds():
    c = CanonicalForm.from_matrix(tm(1, 3, [[{(0, 3): 1}, {(1, 2): 1}], [{}, {(0, 0): 1}]]))
    for seed in range(50):
        assert roundtrip_check(c, RandomSpec(seed, 1, 2, 3)).passed


def test_corrupted_gauge_is_caught():
    spec = RandomSpec(5, 1, 2, 3, exponents=(3, 0), ops=6)
    g = random_gauge(spec)
    inv = thaw(g.left_inv)
    # drop one nonzero term from the stored inverse
    r, c = next((r, c) for r in range(2) for c in range(2) if inv[r][c].terms() and (r != c))
    u, z, coeff = inv[r][c].terms()[0]
    inv[r][c] = inv[r][c] - type(inv[r][c]).monomial(coeff, u, z, 3)
    bad = GaugeTransform.unchecked(1, g.left, freeze(inv), g.right, g.right_inv)
    v = roundtrip_check(random_canonical(spec), spec, scramble=bad)
    assert not v.passed and v.stage == "scramble"
    assert "left*left_inv" in v.message
    assert "status=fail stage=scramble" in v.line()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fuzz_sample(k):
    for seed in range(15):
        v = fuzz_seed(seed, k)
        assert v.passed, v.line()


def test_spec_validation():
    with pytest.raises(ValueError):
        RandomSpec(-1, 1, 2, 3)
    with pytest.raises(ValueError):
        RandomSpec(0, 1, 2, 3, exponents=(1,))
