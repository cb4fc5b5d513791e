import pytest

from obk.errors import InvariantError, ParseError
from obk.fileio import parse_bundle, parse_gauge, read_blocks, write_bundle, write_gauge
from obk.harness import RandomSpec, random_bundle, random_gauge
from obk.ring import mpq

DIAG = """bundle k=1 rank=2 trunc=4
entry 1 1
term u=0 z=3 c=1
entry 2 2
term u=0 z=0 c=1
end
"""


def test_round_trip_is_byte_identical():
    assert write_bundle(parse_bundle(DIAG)) == DIAG


def test_rationals_are_canonicalized():
    text = DIAG.replace("term u=0 z=0 c=1", "term u=0 z=0 c=2/4")
    t = parse_bundle(text)
    assert t.entries[1][1][0].coeff(0) == mpq(1, 2)
    assert "c=1/2" in write_bundle(t)


def test_non_monomial_determinant_is_invariant_error():
    text = """bundle k=1 rank=2 trunc=0
entry 1 1
term u=0 z=1 c=1
entry 1 2
term u=0 z=0 c=1
entry 2 1
term u=0 z=0 c=1
entry 2 2
term u=0 z=1 c=1
end
"""
    with pytest.raises(InvariantError, match="line 1"):
        parse_bundle(text)


def test_comments_and_blank_lines_ignored():
    text = "# header\n\n" + DIAG.replace("entry 2 2", "entry 2 2   # unit")
    assert parse_bundle(text) == parse_bundle(DIAG)


@pytest.mark.parametrize("text, line", [
    ("bundle k=1 rank=2\nend\n", 1),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nterm u=0 z=0 c=1\n", 1),
    ("bundle k=1 rank=1 trunc=1\nentry 2 1\nterm u=0 z=0 c=1\nend\n", 2),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nterm u=2 z=0 c=1\nend\n", 3),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nterm u=0 z=0 c=1/0\nend\n", 3),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nterm u=0 z=0 c=1\nterm u=0 z=0 c=2\nend\n", 4),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nend\n", 2),
    ("bundle k=1 rank=1 trunc=1\nentry 1 1\nterm u=0 z=0 c=x\nend\n", 3),
    ("bundle k=0 rank=1 trunc=1\nend\n", 1),
])
def test_syntax_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        read_blocks(text) if "k=0" in text else parse_bundle(text)
    assert info.value.lineno == line
    assert str(info.value).startswith(f"line {line}:")


def test_bundle_file_needs_exactly_one_block():
    with pytest.raises(ParseError):
        parse_bundle(DIAG + DIAG)


@pytest.mark.parametrize("seed", range(5))
def test_random_round_trips(seed):
    spec = RandomSpec(seed, 2, 3, 4, exponents=(5, 2, 0))
    t = random_bundle(spec)
    assert parse_bundle(write_bundle(t)) == t
    g = random_gauge(spec)
    text = write_gauge(g)
    assert parse_gauge(text) == g
    assert write_gauge(parse_gauge(text)) == text


def test_gauge_file_block_count():
    with pytest.raises(ParseError, match="4 blocks"):
        parse_gauge(DIAG)
