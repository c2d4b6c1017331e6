"""Command line front end: expression parser, problem files, subcommands.

Problem files are line oriented::

    # comment
    [ring]
    p = 2
    variables = x, y, z
    order = grevlex

    [ideal I]
    x^3 + y^3 + z^3

    [canonical]          # optional pre-image J of a canonical ideal
    [element u]          # optional Frobenius structure / test element (c)
    [task]
    test-ideal --gorenstein

Generators may be given one per line or separated by commas.
"""

from __future__ import annotations

import argparse
import io
import re
import shlex
import sys
from dataclasses import dataclass, field

from .arith import MonomialOrder, Polynomial, RingSpec
from .canonical import ext_presentation, free_resolution, u_generator
from .errors import FsingError, InputError, InternalConsistencyError, ParseError, PreconditionError
from .frobroot import FrobeniusPair, fedder_f_injective, frobenius_root_ideal, nilpotency_analysis, star_closure
from .groebner import Ideal, krull_dimension
from .testideal import parameter_test_ideal

# --- expressions -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str, offset: int = 0):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        num, ident, sym = m.groups()
        col = m.start(m.lastindex) + 1 + offset
        if num is not None:
            tokens.append(("int", int(num), col))
        elif ident is not None:
            tokens.append(("ident", ident, col))
        elif sym in "+-*^()":
            tokens.append((sym, sym, col))
        else:
            raise ParseError(f"unexpected character {sym!r}", col)
        pos = m.end()
    tokens.append(("end", None, len(text) + 1 + offset))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingSpec, offset: int = 0):
        self.ring = ring
        self.toks = _tokenize(text, offset)
        self.i = 0
        self.index = {v: k for k, v in enumerate(ring.variables)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.peek()[2])
        value = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            hint = "; use `*` for multiplication" if kind in ("ident", "int", "(") else ""
            raise ParseError(f"unexpected `{val}`{hint}", col)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val, col = self.peek()
            if kind == "-":
                raise ParseError("exponent must be a positive integer", col)
            if kind != "int":
                raise ParseError("expected an integer exponent", col)
            self.take()
            if val <= 0:
                raise ParseError("exponent must be a positive integer", col)
            return base**val
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return self.ring.constant(val)
        if kind == "ident":
            if val not in self.index:
                raise ParseError(f"unknown identifier `{val}`", col)
            return self.ring.var(val)
        if kind == "(":
            value = self.expr()
            kind, val, col = self.take()
            if kind != ")":
                raise ParseError("expected `)`", col)
            return value
        if kind == "end":
            raise ParseError("unexpected end of expression", col)
        raise ParseError(f"unexpected `{val}`", col)


def parse_polynomial(text: str, ring: RingSpec, offset: int = 0) -> Polynomial:
    """Parse ``text`` over ``ring``; columns in errors are 1-based (+ offset)."""
    return _Parser(text, ring, offset).parse()


def parse_generators(text: str, ring: RingSpec) -> list:
    """Comma separated expressions."""
    out = []
    start = 0
    for piece in text.split(","):
        if piece.strip():
            out.append(parse_polynomial(piece, ring, offset=start))
        start += len(piece) + 1
    return out


# --- problem files -----------------------------------------------------------


@dataclass
class ProblemFile:
    ring: RingSpec
    ideals: dict = field(default_factory=dict)
    canonical: Ideal | None = None
    elements: dict = field(default_factory=dict)
    task: str | None = None

    def ideal(self, name: str | None = None) -> Ideal:
        if name is None:
            if "I" in self.ideals:
                return self.ideals["I"]
            if len(self.ideals) == 1:
                return next(iter(self.ideals.values()))
            raise InputError("several ideals declared; choose one with --ideal")
        if name not in self.ideals:
            raise InputError(f"no ideal named {name!r}")
        return self.ideals[name]


_HEADER = re.compile(r"^\[\s*(ring|ideal|canonical|element|task)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\]$")


def parse_problem(text: str) -> ProblemFile:
    blocks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("["):
            m = _HEADER.match(line.strip())
            if not m:
                raise InputError(f"line {lineno}: bad block header {line.strip()!r}")
            kind, name = m.groups()
            if kind in ("ideal", "element") and not name:
                raise InputError(f"line {lineno}: [{kind}] needs a name")
            if kind in ("ring", "canonical", "task") and name:
                raise InputError(f"line {lineno}: [{kind}] takes no name")
            blocks.append((kind, name, lineno, []))
            continue
        if not blocks:
            raise InputError(f"line {lineno}: content before the first block header")
        blocks[-1][3].append((lineno, line))

    rings = [b for b in blocks if b[0] == "ring"]
    if len(rings) != 1:
        raise InputError("exactly one [ring] block is required")
    ring = _parse_ring(rings[0][3])
    prob = ProblemFile(ring=ring)

    def gens_of(lines):
        out = []
        for lineno, line in lines:
            try:
                out.extend(parse_generators(line, ring))
            except ParseError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        return out

    for kind, name, lineno, lines in blocks:
        if kind == "ideal":
            if name in prob.ideals:
                raise InputError(f"line {lineno}: ideal {name!r} declared twice")
            prob.ideals[name] = Ideal(ring, gens_of(lines))
        elif kind == "canonical":
            prob.canonical = Ideal(ring, gens_of(lines))
        elif kind == "element":
            gens = gens_of(lines)
            if len(gens) != 1:
                raise InputError(f"line {lineno}: element {name!r} needs exactly one expression")
            prob.elements[name] = gens[0]
        elif kind == "task":
            body = " ".join(line.strip() for _, line in lines)
            prob.task = body or None
    if not prob.ideals:
        raise InputError("no [ideal NAME] block")
    return prob


def _parse_ring(lines) -> RingSpec:
    fields = {}
    for lineno, line in lines:
        if "=" not in line:
            raise InputError(f"line {lineno}: expected `key = value` in [ring]")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ("p", "variables", "order"):
            raise InputError(f"line {lineno}: unknown ring field {key!r}")
        fields[key] = (lineno, value)
    if "p" not in fields or "variables" not in fields:
        raise InputError("[ring] needs p and variables")
    lineno, p = fields["p"]
    if not p.isdigit():
        raise InputError(f"line {lineno}: p must be a positive integer")
    names = [v for v in re.split(r"[\s,]+", fields["variables"][1]) if v]
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
            raise InputError(f"bad variable name {v!r}")
    order = MonomialOrder.parse(fields["order"][1]) if "order" in fields else MonomialOrder("grevlex")
    return RingSpec(int(p), tuple(names), order)


# --- rendering ---------------------------------------------------------------


def sorted_generators(I: Ideal) -> list:
    """Reduced GB of I sorted by degree, then by leading term, largest first."""
    key = I.ring.order.key
    return sorted(I.gb().elements, key=lambda g: (g.degree(), [-x for x in _flat(key(g.leading_monomial()))]))


def _flat(k):
    out = []
    for x in k:
        if isinstance(x, tuple):
            out.extend(_flat(x))
        else:
            out.append(x)
    return out


class _Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.buf = io.StringIO()

    def value(self, key, val):
        if isinstance(val, bool):
            val = "true" if val else "false"
        sep = "=" if self.fmt == "machine" else ": "
        self.buf.write(f"{key}{sep}{val}\n")

    def ideal(self, key, I: Ideal):
        gens = sorted_generators(I) if not I.is_zero() else []
        if self.fmt == "machine":
            self.buf.write(f"{key}.count={len(gens)}\n")
            for k, g in enumerate(gens):
                self.buf.write(f"{key}.{k}={g}\n")
        else:
            self.buf.write(f"{key}:\n")
            for g in gens or ["0"]:
                self.buf.write(f"  {g}\n")

    def matrix(self, key, M):
        if self.fmt == "machine":
            self.buf.write(f"{key}.shape={M.rows}x{M.cols}\n")
            for i in range(M.rows):
                self.buf.write(f"{key}.row{i}=" + ", ".join(str(M[i, j]) for j in range(M.cols)) + "\n")
        else:
            self.buf.write(f"{key}: {M.rows}x{M.cols}\n")
            for line in str(M).splitlines():
                self.buf.write(f"  {line}\n")

    def text(self):
        return self.buf.getvalue()


# --- commands ----------------------------------------------------------------


def _element(prob: ProblemFile, text: str | None, name: str):
    if text is not None:
        return parse_polynomial(text, prob.ring)
    return prob.elements.get(name)


def _canonical(prob: ProblemFile, args):
    if args.canonical is not None:
        return Ideal(prob.ring, parse_generators(args.canonical, prob.ring))
    return prob.canonical


def _structure(prob: ProblemFile, I: Ideal, args):
    """The Frobenius structure u: given explicitly, or found from J."""
    u = _element(prob, args.u, "u")
    if u is not None:
        return u
    J = _canonical(prob, args)
    if J is None and not args.gorenstein:
        raise InputError("no u given: supply --u, an [element u] block, a canonical ideal or --gorenstein")
    return u_generator(I, None if args.gorenstein else J + I, seed=args.seed)


def cmd_gb(prob, I, args, out):
    out.ideal("gb", I)


def cmd_dim(prob, I, args, out):
    d = krull_dimension(I)
    out.value("dim", "empty" if d is None else d)


def cmd_root(prob, I, args, out):
    out.value("e", args.e)
    out.ideal("root", frobenius_root_ideal(I, args.e))


def cmd_star(prob, I, args, out):
    u = _element(prob, args.u, "u")
    if u is None:
        raise InputError("star needs --u or an [element u] block")
    out.value("e", args.e)
    out.value("u", u)
    out.ideal("star", star_closure(I, u, args.e))


def cmd_nilpotency(prob, I, args, out):
    u = _structure(prob, I, args)
    rep = nilpotency_analysis(FrobeniusPair(I, u, args.e), variant=args.variant)
    out.value("u", u)
    out.value("variant", rep.variant)
    out.value("chain_length", len(rep.chain))
    for k, Jk in enumerate(rep.chain, start=1):
        out.ideal(f"J{k}", Jk)
    out.value("eta", rep.eta)
    out.value("torsion_free", rep.torsion_free)
    out.ideal("nil_ideal", rep.nil_ideal)


def cmd_fedder(prob, I, args, out):
    res = fedder_f_injective(list(I.generators))
    out.value("u", res.u)
    out.value("f_injective", res.verdict)


def cmd_ext(prob, I, args, out):
    res = free_resolution(I)
    ranks = [1] + [s.differential.cols for s in res]
    out.value("betti", " ".join(map(str, ranks)))
    out.value("length", len(res))
    dim = krull_dimension(I)
    delta = args.delta if args.delta is not None else prob.ring.nvars - (dim or 0)
    E = ext_presentation(I, delta, res)
    out.value("delta", delta)
    out.value("generators", E.rows)
    out.matrix("presentation", E)


def cmd_test_ideal(prob, I, args, out):
    J = None if args.gorenstein else _canonical(prob, args)
    c = _element(prob, args.c, "c")
    rep = parameter_test_ideal(I, J, gorenstein=args.gorenstein, c=c, seed=args.seed)
    out.value("seed", args.seed)
    out.value("u", rep.u)
    out.value("torsion_free", rep.nilpotency.torsion_free)
    out.value("eta", rep.nilpotency.eta)
    out.value("c", rep.c)
    out.ideal("tau", rep.tau)
    out.value("f_rational", rep.f_rational)
    if args.timings:
        for k, v in rep.timings.items():
            out.value(f"time.{k}", f"{v:.3f}")


COMMANDS = {
    "root": cmd_root,
    "star": cmd_star,
    "nilpotency": cmd_nilpotency,
    "fedder": cmd_fedder,
    "ext": cmd_ext,
    "test-ideal": cmd_test_ideal,
    "dim": cmd_dim,
    "gb": cmd_gb,
}


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("file", help="problem file")
    common.add_argument("--ideal", help="name of the ideal block to use (default I)")
    common.add_argument("--format", choices=["human", "machine"], default="human")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timings", action="store_true", help="report stage timings")

    parser = _ArgParser(prog="fsing", description="Frobenius actions, star closures and parameter test ideals over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgParser)
    for name in ("gb", "dim", "fedder"):
        sub.add_parser(name, parents=[common])
    p = sub.add_parser("root", parents=[common])
    p.add_argument("--e", type=_positive, default=1)
    p = sub.add_parser("star", parents=[common])
    p.add_argument("--u")
    p.add_argument("--e", type=_positive, default=1)
    p = sub.add_parser("nilpotency", parents=[common])
    p.add_argument("--u")
    p.add_argument("--e", type=_positive, default=1)
    p.add_argument("--canonical", help="comma separated generators of J")
    p.add_argument("--gorenstein", action="store_true")
    p.add_argument("--variant", choices=["outside", "inside"], default="outside")
    p = sub.add_parser("ext", parents=[common])
    p.add_argument("--delta", type=int)
    p = sub.add_parser("test-ideal", parents=[common])
    p.add_argument("--canonical", help="comma separated generators of J")
    p.add_argument("--gorenstein", action="store_true")
    p.add_argument("--c")
    p = sub.add_parser("run", parents=[common], help="execute the file's [task] line")
    return parser


def _load(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def _execute(argv, depth=0):
    args = build_parser().parse_args(argv)
    stage = "input"
    prob = _load(args.file)
    if args.command == "run":
        if not prob.task:
            raise InputError("the problem file has no [task] line")
        if depth:
            raise InputError("a [task] line cannot itself be `run`")
        task = shlex.split(prob.task)
        extra = ["--format", args.format, "--seed", str(args.seed)]
        if args.ideal:
            extra += ["--ideal", args.ideal]
        if args.timings:
            extra.append("--timings")
        return _execute([task[0], args.file, *task[1:], *extra], depth + 1)
    I = prob.ideal(args.ideal)
    out = _Report(args.format)
    out.value("command", args.command)
    stage = args.command
    try:
        COMMANDS[args.command](prob, I, args, out)
    except FsingError as exc:
        exc.stage = stage
        raise
    return out.text()


def run(argv) -> tuple[int, str, str]:
    """Run the command line ``argv``; returns (exit code, stdout, stderr)."""
    try:
        return 0, _execute(list(argv)), ""
    except InputError as exc:
        code, exc_ = 1, exc
    except PreconditionError as exc:
        code, exc_ = 2, exc
    except InternalConsistencyError as exc:
        code, exc_ = 3, exc
    except (OverflowError, ValueError) as exc:
        code, exc_ = 1, exc
    stage = getattr(exc_, "stage", "input")
    return code, "", f"fsing: {stage}: {exc_}\n"


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
