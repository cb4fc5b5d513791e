"""Seeded generators and the scramble/normalize round-trip check.

Every generator draws from ``random.Random`` seeded with a string built from
the seed and a purpose tag, so identical specs give identical objects on
every run and platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from obk.bundle import GaugeBuilder, GaugeTransform, SplittingType, TransitionMatrix, apply_gauge
from obk.errors import ObkError
from obk.matrix import first_mismatch, mat_mul
from obk.normal_form import CanonicalForm, canonical_support, normalize, window_max_degree
from obk.ring import UJet, jet_invert, mpq

GAUGE_KINDS = ("mixed", "lower", "upper", "diagonal", "permutation")


@dataclass(frozen=True)
class RandomSpec:
    seed: int
    k: int
    rank: int
    trunc: int
    exponents: tuple[int, ...] | None = None
    exp_range: tuple[int, int] = (0, 6)
    coeff_pool: tuple[int, ...] = (-3, -2, -1, 1, 2, 3)
    ops: int = 4
    plant_window: bool = True

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.k < 1 or self.rank < 1 or self.trunc < 0:
            raise ValueError("need k >= 1, rank >= 1, trunc >= 0")
        if self.exponents is not None:
            ex = tuple(sorted(self.exponents, reverse=True))
            if len(ex) != self.rank:
                raise ValueError(f"{len(ex)} exponents for rank {self.rank}")
            object.__setattr__(self, "exponents", ex)

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{tag}:{self.seed}")


def fuzz_spec(seed: int, k: int, rank: int = 2, max_gap: int = 8, max_trunc: int = 12) -> RandomSpec:
    """Spec used by the fuzz harness: random exponents with j_1 - j_n <= max_gap."""
    rng = random.Random(f"fuzz:{k}:{rank}:{seed}")
    low = rng.randint(0, 3)
    exps = tuple(sorted((low + rng.randint(0, max_gap) for _ in range(rank - 1)), reverse=True))
    exps = exps + (low,)
    need = window_max_degree(k, exps[0], exps[-1])
    trunc = min(max_trunc, max(need, 1) + 2)
    return RandomSpec(seed, k, rank, trunc, exponents=exps, ops=4 if rank > 2 else 6)


# -- random jets ----------------------------------------------------------------

def _coeff(rng, spec):
    return rng.choice(spec.coeff_pool)


def random_v_jet(rng, spec: RandomSpec, min_u: int = 0, max_u: int = 2) -> UJet:
    """Sparse jet holomorphic on chart V (exponent <= k*i at u-degree i)."""
    N, k = spec.trunc, spec.k
    hi = min(max_u, N)
    terms = {}
    for _ in range(rng.randint(1, 2)):
        if min_u > hi:
            break
        i = rng.randint(min_u, hi)
        terms[(i, k * i - rng.randint(0, 2))] = _coeff(rng, spec)
    return UJet.from_terms(N, terms)


def random_u_jet(rng, spec: RandomSpec, min_u: int = 0, max_u: int = 2) -> UJet:
    """Sparse jet holomorphic on chart U (nonnegative exponents)."""
    N = spec.trunc
    hi = min(max_u, N)
    terms = {}
    for _ in range(rng.randint(1, 2)):
        if min_u > hi:
            break
        terms[(rng.randint(min_u, hi), rng.randint(0, 2))] = _coeff(rng, spec)
    return UJet.from_terms(N, terms)


def _random_pair(rng, n):
    r = rng.randrange(n)
    s = rng.randrange(n - 1)
    return r, s + (s >= r)


def random_gauge(spec: RandomSpec, kind: str = "mixed", rng: random.Random | None = None) -> GaugeTransform:
    """Product of ``spec.ops`` elementary admissible factors, with inverses."""
    if kind not in GAUGE_KINDS:
        raise ValueError(f"unknown gauge kind {kind!r}; expected one of {GAUGE_KINDS}")
    rng = rng or spec.rng(f"gauge-{kind}")
    n, N = spec.rank, spec.trunc
    b = GaugeBuilder(n, spec.k, N)
    choices = {
        "mixed": ("elementary", "elementary", "diagonal", "permutation"),
        "lower": ("lower",),
        "upper": ("upper",),
        "diagonal": ("diagonal",),
        "permutation": ("permutation",),
    }[kind]
    if n == 1:
        choices = ("diagonal",)
    for _ in range(spec.ops):
        op = rng.choice(choices)
        if op in ("elementary", "lower", "upper"):
            r, s = _random_pair(rng, n)
            if (op == "lower" and r < s) or (op == "upper" and r > s):
                r, s = s, r
            side = rng.choice(("left", "right", "both"))
            if side in ("left", "both"):
                b.left_elementary(r, s, random_v_jet(rng, spec))
            if side in ("right", "both"):
                b.right_elementary(r, s, random_u_jet(rng, spec))
        elif op == "diagonal":
            i = rng.randrange(n)
            if rng.random() < 0.5:
                unit = random_v_jet(rng, spec, min_u=1) + rng.choice((1, 2, -1))
                b.left_scale(i, unit, jet_invert(unit))
            else:
                unit = random_u_jet(rng, spec, min_u=1) + rng.choice((1, 2, -1))
                b.right_scale(i, unit, jet_invert(unit))
        else:
            order = list(range(n))
            rng.shuffle(order)
            if rng.random() < 0.5:
                b.left_permute(order)
            else:
                b.right_permute(order)
    return b.gauge()


def random_canonical(spec: RandomSpec, rng: random.Random | None = None) -> CanonicalForm:
    """Canonical form with exponents from ``spec`` and random in-window entries."""
    rng = rng or spec.rng("canonical")
    n, N, k = spec.rank, spec.trunc, spec.k
    if spec.exponents is not None:
        exps = spec.exponents
    else:
        lo, hi = spec.exp_range
        exps = tuple(sorted((rng.randint(lo, hi) for _ in range(n)), reverse=True))
    rows = [[UJet.zero(N) for _ in range(n)] for _ in range(n)]
    for r in range(n):
        rows[r][r] = UJet.monomial(1, 0, exps[r], N)
        for s in range(r + 1, n):
            if not spec.plant_window:
                continue
            terms = {(i, l): _coeff(rng, spec)
                     for i, l in sorted(canonical_support(k, exps[r], exps[s]))
                     if i <= N and rng.random() < 0.5}
            rows[r][s] = UJet.from_terms(N, terms)
    return CanonicalForm.from_matrix(TransitionMatrix(k, rows))


def random_bundle(spec: RandomSpec) -> TransitionMatrix:
    """Gauge scramble of a random canonical form; invertible by construction."""
    base = random_canonical(spec)
    return apply_gauge(random_gauge(spec, "mixed"), base.matrix())


# -- round trip -------------------------------------------------------------

@dataclass
class Verdict:
    passed: bool
    seed: int
    stage: str | None = None
    message: str = ""
    scrambled: TransitionMatrix | None = None
    canonical: CanonicalForm | None = None
    gauge: GaugeTransform | None = None
    scramble: GaugeTransform | None = field(default=None, repr=False)

    def line(self) -> str:
        if self.passed:
            ex = " ".join(str(e) for e in self.canonical.exponents)
            return f"seed={self.seed} status=pass exponents={ex}"
        return f"seed={self.seed} status=fail stage={self.stage} detail={self.message}"


def roundtrip_check(c: CanonicalForm, spec: RandomSpec,
                    scramble: GaugeTransform | None = None) -> Verdict:
    """Scramble ``c`` by an admissible gauge, normalize, and certify the result."""
    v = Verdict(False, spec.seed)
    if scramble is None:
        scramble = random_gauge(replace(spec, rank=c.rank, k=c.k, trunc=c.trunc))
    v.scramble = scramble
    problems = scramble.problems()
    if problems:
        v.stage, v.message = "scramble", problems[0]
        return v
    try:
        t = TransitionMatrix(c.k, mat_mul(mat_mul(scramble.left, c.matrix().entries),
                                          scramble.right))
    except ObkError as exc:
        v.stage, v.message = "scramble", str(exc)
        return v
    v.scrambled = t
    try:
        cf, g = normalize(t)
    except ObkError as exc:
        v.stage, v.message = "normalize", f"{type(exc).__name__}: {exc}"
        return v
    v.canonical, v.gauge = cf, g
    if not cf.all_certified():
        bad = [(r + 1, s + 1) for r in range(cf.rank) for s in range(cf.rank)
               if not cf.window_certified[r][s]]
        v.stage, v.message = "window", f"entries {bad} leave their windows"
        return v
    if cf.exponents != c.exponents:
        v.stage = "splitting"
        v.message = f"exponents {cf.exponents} differ from planted {c.exponents}"
        return v
    bad = first_mismatch(apply_gauge(g, t).entries, cf.matrix().entries)
    if bad:
        v.stage = "equivalence"
        v.message = "entry ({},{}) term u^{} z^{}: {} vs {}".format(*bad)
        return v
    v.passed = True
    return v


def fuzz_seed(seed: int, k: int, rank: int = 2) -> Verdict:
    spec = fuzz_spec(seed, k, rank)
    return roundtrip_check(random_canonical(spec), spec)


def random_unimodular(rng: random.Random, n: int, inverse_z: bool, steps: int = 4,
                      pool: tuple[int, ...] = (-3, -2, -1, 1, 2, 3)):
    """Product of elementary Laurent matrices, polynomial in z (or in 1/z).

    Returns (M, M^-1); det(M) is a nonzero constant.
    """
    from obk.matrix import freeze, laurent_identity, thaw
    from obk.ring import LaurentPoly

    M = thaw(laurent_identity(n))
    Minv = thaw(laurent_identity(n))
    sign = -1 if inverse_z else 1
    for _ in range(steps):
        if n > 1 and rng.random() < 0.8:
            r, s = _random_pair(rng, n)
            f = LaurentPoly({sign * rng.randint(0, 2): rng.choice(pool)})
            # M <- M @ (I + f E_rs), Minv <- (I - f E_rs) @ Minv
            for row in M:
                row[s] = row[s] + row[r] * f
            Minv[r] = [a - f * b for a, b in zip(Minv[r], Minv[s])]
        else:
            i = rng.randrange(n)
            c = rng.choice(pool)
            for row in M:
                row[i] = row[i] * c
            Minv[i] = [a * mpq(1, c) for a in Minv[i]]
    return freeze(M), freeze(Minv)


def planted_birkhoff(seed: int, rank: int, exp_range: tuple[int, int] = (-3, 5)):
    """(Q(1/z) @ diag(z**e) @ P(z), e) for random unimodular Q and P."""
    from obk.matrix import diag_monomials

    rng = random.Random(f"birkhoff:{rank}:{seed}")
    e = [rng.randint(*exp_range) for _ in range(rank)]
    Q, _ = random_unimodular(rng, rank, inverse_z=True)
    P, _ = random_unimodular(rng, rank, inverse_z=False)
    return mat_mul(mat_mul(Q, diag_monomials(e)), P), tuple(e)
