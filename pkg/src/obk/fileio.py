"""Line-oriented text format for transition matrices and gauges.

::

    bundle k=1 rank=2 trunc=4
    entry 1 1
    term u=0 z=3 c=1
    entry 2 2
    term u=0 z=0 c=1
    end

``#`` starts a comment.  Unlisted entries are zero.  Output lists entries
row-major and terms by (u, z) ascending, with rationals in lowest terms.
A gauge file is four such blocks in the order left, left_inv, right,
right_inv.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from obk.bundle import GaugeTransform, TransitionMatrix
from obk.errors import InvariantError, ParseError
from obk.matrix import Matrix, freeze
from obk.ring import Scalar, UJet, mpq

_HEADER = re.compile(r"bundle\s+k=(-?\d+)\s+rank=(-?\d+)\s+trunc=(-?\d+)")
_ENTRY = re.compile(r"entry\s+(-?\d+)\s+(-?\d+)")
_TERM = re.compile(r"term\s+u=(-?\d+)\s+z=(-?\d+)\s+c=(-?\d+)(?:/(\d+))?")

GAUGE_ROLES = ("left", "left_inv", "right", "right_inv")


@dataclass(frozen=True)
class Block:
    k: int
    entries: Matrix
    lineno: int

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def trunc(self) -> int:
        return self.entries[0][0].trunc


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_blocks(text: str) -> list[Block]:
    """Parse every ``bundle ... end`` block without checking invariants."""
    blocks: list[Block] = []
    it = iter(_lines(text))
    for lineno, line in it:
        m = _HEADER.fullmatch(line)
        if not m:
            raise ParseError(f"expected 'bundle k=<int> rank=<int> trunc=<int>', got {line!r}", lineno)
        k, rank, trunc = (int(g) for g in m.groups())
        if k < 1:
            raise ParseError(f"k must be >= 1, got {k}", lineno)
        if rank < 1:
            raise ParseError(f"rank must be >= 1, got {rank}", lineno)
        if trunc < 0:
            raise ParseError(f"trunc must be >= 0, got {trunc}", lineno)
        header_line = lineno
        terms: dict[tuple[int, int], dict[tuple[int, int], Scalar]] = {}
        current = None
        current_line = None
        closed = False
        for lineno, line in it:
            if line == "end":
                closed = True
                break
            m = _ENTRY.fullmatch(line)
            if m:
                if current is not None and not terms[current]:
                    raise ParseError("entry has no term lines", current_line)
                r, c = int(m.group(1)), int(m.group(2))
                if not (1 <= r <= rank and 1 <= c <= rank):
                    raise ParseError(f"entry ({r},{c}) outside a rank-{rank} matrix", lineno)
                if (r - 1, c - 1) in terms:
                    raise ParseError(f"entry ({r},{c}) listed twice", lineno)
                current, current_line = (r - 1, c - 1), lineno
                terms[current] = {}
                continue
            m = _TERM.fullmatch(line)
            if m:
                if current is None:
                    raise ParseError("term line before any entry line", lineno)
                u, z = int(m.group(1)), int(m.group(2))
                den = int(m.group(4)) if m.group(4) else 1
                if den == 0:
                    raise ParseError("zero denominator", lineno)
                if u < 0 or u > trunc:
                    raise ParseError(f"u={u} outside 0..{trunc}", lineno)
                if (u, z) in terms[current]:
                    raise ParseError(f"duplicate term u={u} z={z}", lineno)
                terms[current][(u, z)] = mpq(int(m.group(3)), den)
                continue
            raise ParseError(f"unrecognized line {line!r}", lineno)
        if not closed:
            raise ParseError("missing 'end'", header_line)
        if current is not None and not terms[current]:
            raise ParseError("entry has no term lines", current_line)
        zero = UJet.zero(trunc)
        rows = [[zero] * rank for _ in range(rank)]
        for (r, c), t in terms.items():
            rows[r][c] = UJet.from_terms(trunc, t)
        blocks.append(Block(k, freeze(rows), header_line))
    return blocks


def parse_bundle(text: str) -> TransitionMatrix:
    blocks = read_blocks(text)
    if len(blocks) != 1:
        raise ParseError(f"expected exactly one bundle block, found {len(blocks)}")
    b = blocks[0]
    try:
        return TransitionMatrix(b.k, b.entries)
    except InvariantError as exc:
        raise InvariantError(f"line {b.lineno}: {exc}") from None


def write_block(k: int, entries: Matrix, comment: str | None = None) -> str:
    n = len(entries)
    trunc = entries[0][0].trunc
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(f"bundle k={k} rank={n} trunc={trunc}")
    for r in range(n):
        for c in range(n):
            f = entries[r][c]
            if not f:
                continue
            out.append(f"entry {r + 1} {c + 1}")
            for u, z, coeff in f.terms():
                out.append(f"term u={u} z={z} c={coeff}")
    out.append("end")
    return "\n".join(out) + "\n"


def write_bundle(t: TransitionMatrix) -> str:
    return write_block(t.k, t.entries)


def write_gauge(g: GaugeTransform) -> str:
    return "".join(write_block(g.k, getattr(g, role), comment=role) for role in GAUGE_ROLES)


def parse_gauge(text: str, check: bool = True) -> GaugeTransform:
    blocks = read_blocks(text)
    if len(blocks) != 4:
        raise ParseError(f"a gauge file needs 4 blocks ({', '.join(GAUGE_ROLES)}), found {len(blocks)}")
    ks = {b.k for b in blocks}
    if len(ks) != 1:
        raise ParseError("gauge blocks disagree on k")
    mats = [b.entries for b in blocks]
    if check:
        return GaugeTransform(blocks[0].k, *mats)
    return GaugeTransform.unchecked(blocks[0].k, *mats)
