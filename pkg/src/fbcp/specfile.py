"""The ``.bog`` spec-file grammar.

    # comment
    symbol t
    rep a { atom sym:t mult 1 }
    rep b {
      atom 1/3 mult 1 ; atom -1 mult 1
      wm left_regular mult 1 flags mixing
    }

Statements end at a newline or ``;``.  Angles use the circle literal
syntax plus the shorthands ``1`` (angle 0) and ``-1`` (angle 1/2).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .circle import parse_angle
from .errors import ConflictingFlags, InvalidMultiplicity, ParseError, UnknownRepresentation
from .ext import INF
from .rep import FLAGS, WM_KINDS, Representation, make_rep, make_wm

GRAMMAR = """\
spec file grammar (line oriented, '#' starts a comment, ';' separates statements):
  symbol NAME
  rep NAME {
    atom ANGLE mult (INT|inf)
    wm (left_regular|singular_closed|atomless) [mult (INT|inf)] [flags mixing|mildly_mixing|rigid ...]
  }
ANGLE: p/q | sym:NAME | compound like 1/2+2*sym:NAME; shorthands 1 -> 0 and -1 -> 1/2
"""

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*$")


@dataclass
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    """Split into words, braces and statement ends (``;`` and newlines -> ``;``)."""
    out: list[Token] = []
    for ln, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        for m in re.finditer(r"[{};]|[^\s{};]+", line):
            out.append(Token(m.group(0), ln, m.start() + 1))
        out.append(Token(";", ln, len(line) + 1))
    return out


@dataclass
class SpecFile:
    symbols: tuple = ()
    reps: dict = field(default_factory=dict)

    def get(self, name: str) -> Representation:
        try:
            return self.reps[name]
        except KeyError:
            raise UnknownRepresentation(f"unknown representation {name!r}") from None


class _Parser:
    def __init__(self, text: str, symbols=None, implicit_symbols=False):
        self.toks = tokenize(text)
        self.i = 0
        self.symbols: list[str] = list(symbols or [])
        self.implicit = implicit_symbols

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.i += 1
        return t

    def skip_ends(self):
        while self.peek() is not None and self.peek().text == ";":
            self.i += 1

    def expect_end(self):
        t = self.peek()
        if t is not None and t.text not in (";", "}"):
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col)

    def name(self, what):
        t = self.take()
        if not _NAME.match(t.text):
            raise ParseError(f"expected {what} name, got {t.text!r}", t.line, t.col)
        return t

    def specfile(self) -> SpecFile:
        spec = SpecFile()
        self.skip_ends()
        while self.peek() is not None:
            t = self.take()
            if t.text == "symbol":
                n = self.name("symbol")
                if n.text not in self.symbols:
                    self.symbols.append(n.text)
                self.expect_end()
            elif t.text == "rep":
                n = self.name("representation")
                if n.text in spec.reps:
                    raise ParseError(f"duplicate representation {n.text!r}", n.line, n.col)
                b = self.take()
                if b.text != "{":
                    raise ParseError("expected '{'", b.line, b.col)
                spec.reps[n.text] = self.body(n.text, closing=True)
            else:
                raise ParseError(f"expected 'symbol' or 'rep', got {t.text!r}", t.line, t.col)
            self.skip_ends()
        spec.symbols = tuple(self.symbols)
        return spec

    def body(self, name: str, closing: bool) -> Representation:
        atoms, wms = [], []
        while True:
            self.skip_ends()
            t = self.peek()
            if t is None:
                if closing:
                    self.take()
                break
            if t.text == "}":
                if not closing:
                    raise ParseError("unexpected '}'", t.line, t.col)
                self.take()
                break
            self.take()
            if t.text == "atom":
                atoms.append(self.atom())
            elif t.text == "wm":
                wms.append(self.wm())
            else:
                raise ParseError(f"expected 'atom' or 'wm', got {t.text!r}", t.line, t.col)
            self.expect_end()
        used = {s for p, _ in atoms for s in p.symbols}
        return make_rep(atoms, wms, name, sorted(used) if self.implicit else self.symbols)

    def multiplicity(self):
        t = self.take()
        if t.text == "inf":
            return INF
        if not re.fullmatch(r"-?\d+", t.text):
            raise ParseError(f"expected integer or inf, got {t.text!r}", t.line, t.col)
        v = int(t.text)
        if v < 1:
            raise InvalidMultiplicity(f"multiplicity must be >= 1, got {v}", t.line, t.col)
        return v

    def atom(self):
        t = self.take()
        if t.text == "1":
            p = parse_angle("0")
        elif t.text == "-1":
            p = parse_angle("1/2")
        else:
            try:
                p = parse_angle(t.text, None if self.implicit else self.symbols, check_range=True)
            except ParseError as e:
                raise type(e)(e.message, t.line, t.col + (e.col or 1) - 1) from None
        mult = 1
        if self.peek() is not None and self.peek().text == "mult":
            self.take()
            mult = self.multiplicity()
        return p, mult

    def wm(self):
        t = self.take()
        if t.text not in WM_KINDS:
            raise ParseError(f"unknown wm kind {t.text!r}", t.line, t.col)
        mult, flags = 1, []
        nxt = self.peek()
        if nxt is not None and nxt.text == "mult":
            self.take()
            mult = self.multiplicity()
        nxt = self.peek()
        if nxt is not None and nxt.text == "flags":
            self.take()
            while self.peek() is not None and self.peek().text not in (";", "}"):
                f = self.take()
                for piece in re.split(r"[|,]", f.text):
                    if piece not in FLAGS:
                        raise ParseError(f"unknown flag {piece!r}", f.line, f.col)
                    flags.append(piece)
        try:
            return make_wm(t.text, mult, flags)
        except ConflictingFlags as e:
            raise ConflictingFlags(e.message, t.line, t.col) from None


def parse_specfile(text: str) -> SpecFile:
    return _Parser(text).specfile()


def parse_body(text: str, symbols=None) -> Representation:
    p = _Parser(text, symbols, implicit_symbols=symbols is None)
    return p.body("", closing=False)
