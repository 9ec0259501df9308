"""Parser for the bracket text grammar.

    expr      := ['-'] term (('+' | '-') term)*
    term      := [coeff ['*']] bracket
    coeff     := INT ['/' INT]
    bracket   := '[' insertion* ['|' profile (',' profile)*] ']' '_{' 'r=' INT ',' 'h=' INT ',' 'd=' INT '}'
    insertion := 't' level '(' class ')'
    level     := INT | '~' | '{' (INT | NAME | '~') '}'
    class     := '1' | 'w' | ('a' | 'b') [INT]
    profile   := '(' INT (',' INT)* ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .brackets import Acc, BracketTerm, ClassExpr, Insertion
from .cohomology import OMEGA, ONE, alpha, beta
from .partitions import Partition


class ParseError(ValueError):
    """Syntax or semantic error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, kind: str = "syntax"):
        self.message, self.line, self.column, self.kind = message, line, column, kind
        super().__init__(f"{kind} error at line {line}, column {column}: {message}")

    def to_json(self) -> dict:
        return {"error": self.kind, "message": self.message, "line": self.line,
                "column": self.column}


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_]+)
  | (?P<punct>[\[\]|(){},=_*/+\-~])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = self._lex(text)
        self.i = 0

    # -- lexing -----------------------------------------------------------

    def _where(self, pos: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def _lex(self, text: str) -> list[Tok]:
        out, pos = [], 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", *self._where(pos))
            if m.lastgroup != "ws":
                out.append(Tok(m.lastgroup, m.group(), pos))
            pos = m.end()
        out.append(Tok("eof", "", len(text)))
        return out

    # -- helpers ----------------------------------------------------------

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Tok | None = None, kind: str = "syntax"):
        tok = tok or self.tok
        return ParseError(msg, *self._where(tok.pos), kind=kind)

    def accept(self, text: str) -> Tok | None:
        if self.tok.kind != "eof" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Tok:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        v = int(self.tok.text)
        self.i += 1
        return v

    # -- grammar ----------------------------------------------------------

    def parse_expr(self) -> ClassExpr:
        acc = Acc()
        sign = -1 if self.accept("-") else 1
        while True:
            c, t = self.parse_term()
            acc.add(ClassExpr.atom(t), sign * c * t.sign)
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return acc.freeze()

    def parse_term(self) -> tuple[Fraction, BracketTerm]:
        c = Fraction(1)
        if self.tok.kind == "int":
            c = Fraction(self.expect_int())
            if self.accept("/"):
                den_tok = self.tok
                den = self.expect_int()
                if den == 0:
                    raise self.error("zero denominator", den_tok)
                c /= den
            self.accept("*")
        return c, self.parse_bracket()

    def parse_bracket(self) -> BracketTerm:
        start = self.expect("[")
        raw = []
        while self.tok.text == "t":
            raw.append(self.parse_insertion())
        profiles = []
        if self.accept("|"):
            profiles.append(self.parse_profile())
            while self.accept(","):
                profiles.append(self.parse_profile())
        self.expect("]")
        self.expect("_")
        self.expect("{")
        vals = {}
        for i, key in enumerate("rhd"):
            if i:
                self.expect(",")
            self.expect(key)
            self.expect("=")
            vals[key] = self.expect_int()
        self.expect("}")
        h, d = vals["h"], vals["d"]
        ins = tuple(self._resolve(lv, cls, h, tok) for lv, cls, tok in raw)
        for p, tok in profiles:
            if p.size != d:
                raise self.error(f"profile size {p.size} != d={d}", tok, "semantic")
        try:
            return BracketTerm(h, d, tuple(p for p, _ in profiles), ins, vals["r"])
        except ValueError as e:
            raise self.error(str(e), start, "semantic") from None

    def parse_insertion(self):
        tok = self.expect("t")
        if self.tok.kind == "int":
            level = self.expect_int()
        elif self.accept("~"):
            level = "~"
        elif self.accept("{"):
            if self.tok.kind == "int":
                level = self.expect_int()
            elif self.accept("~"):
                level = "~"
            elif self.tok.kind == "name":
                level = self.tok.text
                self.i += 1
                if self.tok.kind == "int" and self.tok.pos == self.toks[self.i - 1].pos + len(level):
                    level += self.tok.text
                    self.i += 1
            else:
                raise self.error("expected a level or profile name")
            self.expect("}")
        else:
            raise self.error("expected a descendent level after 't'")
        self.expect("(")
        ctok = self.tok
        if ctok.kind == "int" and ctok.text == "1":
            cls = ("1", None)
            self.i += 1
        elif ctok.text == "w":
            cls = ("w", None)
            self.i += 1
        elif ctok.text in ("a", "b"):
            self.i += 1
            idx = None
            if self.tok.kind == "int" and self.tok.pos == ctok.pos + 1:
                idx = self.expect_int()
            cls = (ctok.text, idx)
        else:
            raise self.error(f"bad class symbol {ctok.text!r}", ctok)
        self.expect(")")
        return level, cls, ctok

    def _resolve(self, level, cls, h: int, tok: Tok) -> Insertion:
        kind, idx = cls
        if kind == "1":
            return Insertion.pure(level, ONE)
        if kind == "w":
            return Insertion.pure(level, OMEGA)
        if idx is None:
            if h != 1:
                raise self.error(f"class {kind!r} needs a handle index for h={h}", tok, "semantic")
            idx = 1
        if not 1 <= idx <= h:
            raise self.error(f"class {kind}{idx} is not defined for h={h}", tok, "semantic")
        return Insertion.pure(level, alpha(idx) if kind == "a" else beta(idx))

    def parse_profile(self):
        tok = self.expect("(")
        parts = [self.expect_int()]
        while self.accept(","):
            parts.append(self.expect_int())
        self.expect(")")
        if any(p < 1 for p in parts):
            raise self.error("profile parts must be positive", tok, "semantic")
        return Partition(parts), tok


def parse(text: str) -> BracketTerm | ClassExpr:
    """A single unscaled bracket parses to a BracketTerm, anything else to a ClassExpr."""
    p = Parser(text)
    expr = p.parse_expr()
    if len(expr) == 1:
        (t, c), = expr.items()
        if c == 1 and not re.match(r"\s*[-\d]", text):
            return t
    return expr


def parse_bracket(text: str) -> BracketTerm:
    p = Parser(text)
    t = p.parse_bracket()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t
