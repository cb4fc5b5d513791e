"""Command-line front end: ``obk <command> ...``.

Exit codes: 0 success, 1 verification or invariant failure, 2 input error.
The only environment variable read is ``OBK_COLOR`` (``1`` enables ANSI
color on pass/fail markers).
"""

from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from obk.birkhoff import splitting_type
from obk.bundle import TransitionMatrix
from obk.errors import ObkError, ParseError, TruncationTooSmallError
from obk.fileio import parse_bundle, parse_gauge, read_blocks, write_bundle, write_gauge
from obk.harness import RandomSpec, fuzz_seed, random_bundle
from obk.matrix import first_mismatch, mat_mul
from obk.normal_form import (
    CanonicalForm, canonical_dim, canonical_support, normalize, required_trunc, window_max_degree,
)
from obk.sections import line_section, vanishing_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class CommandResult:
    exit_code: int
    stdout: str = ""
    stderr: str = ""
    files: dict[str, str] = field(default_factory=dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


class _Report:
    def __init__(self, fmt: str, color: bool):
        self.fmt, self.color = fmt, color
        self.lines: list[str] = []

    def mark(self, ok: bool) -> str:
        word = "ok" if ok else "FAIL"
        if self.color:
            return f"\x1b[{32 if ok else 31}m{word}\x1b[0m"
        return word

    def add(self, key: str, value) -> None:
        if self.fmt == "machine":
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{key.replace('_', ' ')}: {value}")

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_bundle(path: str) -> TransitionMatrix:
    try:
        return parse_bundle(_read(path))
    except ParseError:
        raise
    except ObkError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _exps(seq) -> str:
    return " ".join(str(e) for e in seq)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="obk", description="Exact normal forms for bundles on O(-k).")
    p.add_argument("--format", choices=("text", "machine"), default="text",
                   help="report style (default: text)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("normalize", help="gauge a bundle file to canonical form")
    s.add_argument("input")
    s.add_argument("-o", "--output")
    s.add_argument("--emit-gauge", metavar="FILE")
    s.add_argument("--trunc", type=int, metavar="N")

    s = sub.add_parser("splitting", help="print the splitting type")
    s.add_argument("input")

    s = sub.add_parser("dim", help="number of free coefficients in the canonical entry")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--j1", type=int, required=True)
    s.add_argument("--j2", type=int, required=True)
    s.add_argument("--verbose", action="store_true")

    s = sub.add_parser("verify", help="check a canonical form and gauge against an input")
    s.add_argument("input")
    s.add_argument("canonical")
    s.add_argument("gauge")

    s = sub.add_parser("section", help="check the trivializing section of a line bundle")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--j", type=int, required=True)

    s = sub.add_parser("random", help="write a seeded random bundle")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--j", nargs="+", required=True, metavar="J",
                   help="exponents, space- or comma-separated")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--ops", type=int, required=True)
    s.add_argument("-o", "--output")

    s = sub.add_parser("fuzz", help="scramble/normalize round trips over a seed range")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seeds", required=True, metavar="S0..S1")
    s.add_argument("--rank", type=int, default=2)
    s.add_argument("--jobs", type=int, default=1)
    return p


# -- commands ---------------------------------------------------------------

def cmd_normalize(args, rep: _Report) -> CommandResult:
    t = _load_bundle(args.input)
    st = splitting_type(t)
    N = args.trunc if args.trunc is not None else required_trunc(t, st.exponents)
    if N < t.max_u_degree():
        raise ParseError(f"--trunc {N} is below the input u-degree {t.max_u_degree()}")
    cf, gauge = normalize(t.with_trunc(N))
    res = CommandResult(EXIT_OK)
    out_text = write_bundle(cf.matrix())
    if args.output:
        res.files[args.output] = out_text
    if args.emit_gauge:
        res.files[args.emit_gauge] = write_gauge(gauge)
    if args.output:
        rep.add("exponents", _exps(cf.exponents))
        rep.add("trunc", N)
        rep.add("split", "yes" if cf.is_split() else "no")
        rep.add("window_certified", rep.mark(cf.all_certified()))
        rep.add("identity_gauge", "yes" if gauge.is_identity() else "no")
        res.stdout = rep.text()
    else:
        res.stdout = out_text
    return res


def cmd_splitting(args, rep: _Report) -> CommandResult:
    t = _load_bundle(args.input)
    return CommandResult(EXIT_OK, _exps(splitting_type(t)) + "\n")


def cmd_dim(args, rep: _Report) -> CommandResult:
    if args.k < 1:
        raise ParseError("--k must be >= 1")
    lines = [str(canonical_dim(args.k, args.j1, args.j2))]
    if args.verbose:
        lines += [f"u^{i} z^{l}" for i, l in sorted(canonical_support(args.k, args.j1, args.j2))]
    return CommandResult(EXIT_OK, "".join(x + "\n" for x in lines))


def cmd_verify(args, rep: _Report) -> CommandResult:
    t = _load_bundle(args.input)
    blocks = read_blocks(_read(args.canonical))
    if len(blocks) != 1:
        raise ParseError(f"{args.canonical}: expected one bundle block, found {len(blocks)}")
    try:
        canon = TransitionMatrix(blocks[0].k, blocks[0].entries)
    except ObkError as exc:
        raise ParseError(f"{args.canonical}: {exc}") from None
    gauge = parse_gauge(_read(args.gauge), check=False)
    if (gauge.k, gauge.rank) != (t.k, t.rank) or (canon.k, canon.rank) != (t.k, t.rank):
        raise ParseError("input, canonical form and gauge disagree on k or rank")
    N = canon.trunc
    if t.max_u_degree() > N:
        raise ParseError(f"input has u-degree {t.max_u_degree()} above the canonical truncation {N}")
    t = t.with_trunc(N)

    ok = True
    problems = gauge.problems()
    rep.add("gauge_admissible", rep.mark(not problems))
    if problems:
        ok = False
        rep.add("gauge_problem", problems[0])
    try:
        bad = first_mismatch(mat_mul(mat_mul(gauge.left, t.entries), gauge.right), canon.entries)
    except (ObkError, IndexError, TypeError):
        # malformed gauge matrices, already reported above
        bad = None
    else:
        rep.add("equivalence", rep.mark(bad is None))
        if bad:
            ok = False
            rep.add("first_mismatch", "entry ({},{}) term u^{} z^{}: got {}, expected {}".format(*bad))
    try:
        cf = CanonicalForm.from_matrix(canon)
    except ObkError as exc:
        ok = False
        rep.add("canonical_shape", rep.mark(False))
        rep.add("shape_problem", str(exc))
    else:
        rep.add("canonical_shape", rep.mark(True))
        rep.add("exponents", _exps(cf.exponents))
        cert = cf.all_certified()
        rep.add("window_certified", rep.mark(cert))
        if cf.rank == 2 and not cert:
            ok = False
        if splitting_type(t) != cf.exponents:
            ok = False
            rep.add("splitting_type", rep.mark(False))
    rep.add("result", "pass" if ok else "fail")
    return CommandResult(EXIT_OK if ok else EXIT_FAIL, rep.text())


def cmd_section(args, rep: _Report) -> CommandResult:
    if args.k < 1:
        raise ParseError("--k must be >= 1")
    s = line_section(args.k, args.j)
    r = vanishing_report(s)
    rep.add("k", r.k)
    rep.add("j", r.j)
    rep.add("section_U", str(s.s_U))
    rep.add("section_V", "v")
    rep.add("cocycle", rep.mark(r.cocycle))
    for c in r.charts:
        locus = "n/a" if c.zero_locus is None else (",".join(c.zero_locus) or "empty")
        rep.add(f"chart_{c.chart}_holomorphic", "yes" if c.holomorphic else "no")
        rep.add(f"chart_{c.chart}_zero_locus", locus)
    rep.add("trivializes_off_zero_section", "yes" if r.trivializes_off_zero_section else "no")
    return CommandResult(EXIT_OK if r.cocycle else EXIT_FAIL, rep.text())


def _parse_exponents(items) -> tuple[int, ...]:
    out = []
    for item in items:
        for part in item.split(","):
            if part.strip():
                try:
                    out.append(int(part))
                except ValueError:
                    raise ParseError(f"bad exponent {part!r}") from None
    return tuple(out)


def cmd_random(args, rep: _Report) -> CommandResult:
    exps = tuple(sorted(_parse_exponents(args.j), reverse=True))
    if len(exps) != args.rank:
        raise ParseError(f"--j lists {len(exps)} exponents for rank {args.rank}")
    if args.k < 1 or args.ops < 0 or not 0 <= args.seed < 2 ** 64:
        raise ParseError("need --k >= 1, --ops >= 0 and a 64-bit unsigned --seed")
    need = window_max_degree(args.k, exps[0], exps[-1])
    spec = RandomSpec(args.seed, args.k, args.rank, max(need, 1) + 2, exponents=exps, ops=args.ops)
    text = write_bundle(random_bundle(spec))
    if args.output:
        return CommandResult(EXIT_OK, files={args.output: text})
    return CommandResult(EXIT_OK, text)


def _parse_seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        lo_i, hi_i = int(lo), int(hi if sep else lo)
    except ValueError:
        raise ParseError(f"--seeds expects S0..S1, got {text!r}") from None
    if lo_i < 0 or hi_i < lo_i:
        raise ParseError(f"empty or negative seed range {text!r}")
    return range(lo_i, hi_i + 1)


def _fuzz_one(job):
    seed, k, rank = job
    return fuzz_seed(seed, k, rank).line()


def cmd_fuzz(args, rep: _Report) -> CommandResult:
    seeds = _parse_seed_range(args.seeds)
    if args.k < 1 or args.rank < 1 or args.jobs < 1:
        raise ParseError("need --k >= 1, --rank >= 1, --jobs >= 1")
    jobs = [(s, args.k, args.rank) for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(_fuzz_one, jobs))
    else:
        lines = [_fuzz_one(j) for j in jobs]
    failed = sum(" status=fail " in line for line in lines)
    out = "".join(line + "\n" for line in lines)
    rep.add("passed", len(lines) - failed)
    rep.add("failed", failed)
    rep.add("result", rep.mark(failed == 0))
    return CommandResult(EXIT_FAIL if failed else EXIT_OK, out + rep.text())


COMMANDS = {
    "normalize": cmd_normalize,
    "splitting": cmd_splitting,
    "dim": cmd_dim,
    "verify": cmd_verify,
    "section": cmd_section,
    "random": cmd_random,
    "fuzz": cmd_fuzz,
}


def run(argv: list[str], env: dict[str, str] | None = None) -> CommandResult:
    """Execute one command without touching the filesystem for outputs."""
    env = os.environ if env is None else env
    parser = build_parser()
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            args = parser.parse_args(argv)
    except UsageError as exc:
        return CommandResult(EXIT_INPUT, stderr=str(exc))
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0), stdout=buf.getvalue())
    rep = _Report(args.format, env.get("OBK_COLOR", "0") == "1")
    try:
        return COMMANDS[args.command](args, rep)
    except (ParseError, TruncationTooSmallError) as exc:
        return CommandResult(EXIT_INPUT, stderr=f"obk {args.command}: {exc}\n")
    except ObkError as exc:
        return CommandResult(EXIT_FAIL, stderr=f"obk {args.command}: {exc}\n")


def main(argv: list[str] | None = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    for path, text in res.files.items():
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
