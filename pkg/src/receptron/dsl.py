"""Text format (``.rcp``) for domains, expressions, units and networks.

Example::

    # cube of side 2 centred at (5, 3, 10)
    domain A { center = [5, 3, 10]; width = [2, 2, 2]; }
    expr F = (rect(x[0], center = 0, width = 2) | rect(x[1], center = 0, width = 2))
             & rect(x[2], center = 0, width = 2);
    unit U = selective(A);
    unit V = expr(F);
    unit T = truth("0110");
    unit M = multidomain(A, B);
    network N = or(A, B);
    main = U;

Units other than ``truth`` accept optional threshold overrides after the
references, ``t = NUM`` (upper) and ``tl = NUM`` (lower).  Overrides are
not range-checked beyond ``tl < t``; they exist to build negative-control
fixtures.

Names must be declared before use and are unique across all kinds.  The
parser stops at the first error and raises :class:`ParseError`.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, field
from typing import Iterator

from receptron.boolexpr import (
    And,
    BoolExpr,
    Not,
    Or,
    Pred,
    TruthTable,
    build_expr_receptron,
    expr_arity,
    synthesize_digital,
)
from receptron.core import Double, Receptron
from receptron.domains import HyperRectDomain, RectPredicate, build_selective_receptron
from receptron.network import Network, build_disjunction_network, build_multidomain_unit

KEYWORDS = {
    "domain", "center", "width", "expr", "unit", "selective", "truth",
    "multidomain", "network", "or", "main", "rect", "x",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>-?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<string>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}()\[\];,=|&!])
    """,
    re.VERBOSE,
)


class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str, token: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        where = f" at {token!r}" if token else ""
        super().__init__(f"{line}:{column}: {message}{where}")


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "string", "ident", "keyword", "punct", "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, col, "unexpected character", text[pos])
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "newline":
            line, col = line + 1, 1
        else:
            if kind == "ident" and lexeme in KEYWORDS:
                kind = "keyword"
            if kind not in ("ws", "comment"):
                yield Token(kind, lexeme, line, col)
            col += len(lexeme)
        pos = m.end()
    yield Token("eof", "", line, col)


# -- document model ------------------------------------------------------------


@dataclass(frozen=True)
class UnitDecl:
    kind: str  # selective | expr | truth | multidomain
    refs: tuple[str, ...] = ()
    table: str | None = None
    t: float | None = None
    tl: float | None = None


@dataclass(frozen=True)
class NetworkDecl:
    refs: tuple[str, ...]
    kind: str = "or"


@dataclass
class SpecDocument:
    main: str
    domains: dict[str, HyperRectDomain] = field(default_factory=dict)
    exprs: dict[str, BoolExpr] = field(default_factory=dict)
    units: dict[str, UnitDecl] = field(default_factory=dict)
    networks: dict[str, NetworkDecl] = field(default_factory=dict)

    def kind_of(self, name: str) -> str | None:
        for kind, table in (("domain", self.domains), ("expr", self.exprs),
                            ("unit", self.units), ("network", self.networks)):
            if name in table:
                return kind
        return None

    def arity_of(self, name: str) -> int:
        kind = self.kind_of(name)
        if kind == "domain":
            return self.domains[name].arity
        if kind == "expr":
            return expr_arity(self.exprs[name])
        if kind == "network":
            return self.domains[self.networks[name].refs[0]].arity
        decl = self.units[name]
        if decl.kind == "selective":
            return self.domains[decl.refs[0]].arity
        if decl.kind == "expr":
            return expr_arity(self.exprs[decl.refs[0]])
        if decl.kind == "truth":
            return TruthTable.from_string(decl.table).arity
        # multidomain units take the external input; fan-out is internal
        return self.domains[decl.refs[0]].arity


# -- parser --------------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        # tokens are pulled lazily so errors surface in source order
        self.stream = tokenize(text)
        self.tokens: list[Token] = []
        self.pos = 0
        self.doc_parts: dict[str, dict] = {"domain": {}, "expr": {}, "unit": {}, "network": {}}
        self.declared: dict[str, str] = {}

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        while len(self.tokens) <= self.pos + offset:
            if self.tokens and self.tokens[-1].kind == "eof":
                return self.tokens[-1]
            self.tokens.append(next(self.stream))
        return self.tokens[self.pos + offset]

    @property
    def nt(self) -> Token:
        return self.peek()

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.nt
        raise ParseError(tok.line, tok.column, message, tok.text)

    def advance(self) -> Token:
        tok = self.nt
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def is_kw(self, word: str) -> bool:
        return self.nt.kind == "keyword" and self.nt.text == word

    def is_punct(self, ch: str) -> bool:
        return self.nt.kind == "punct" and self.nt.text == ch

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            self.error(f"expected '{word}', found {self.describe()}")
        return self.advance()

    def expect(self, ch: str) -> Token:
        if not self.is_punct(ch):
            self.error(f"expected '{ch}', found {self.describe()}")
        return self.advance()

    def describe(self) -> str:
        return "end of input" if self.nt.kind == "eof" else f"'{self.nt.text}'"

    def name(self) -> Token:
        if self.nt.kind != "ident":
            if self.nt.kind == "keyword":
                self.error(f"'{self.nt.text}' is a reserved word, expected a name")
            self.error(f"expected a name, found {self.describe()}")
        return self.advance()

    def number(self) -> float:
        if self.nt.kind != "number":
            self.error(f"expected a number, found {self.describe()}")
        tok = self.advance()
        value = float(tok.text)
        if not math.isfinite(value):
            self.error("number out of range", tok)
        return value

    def integer(self) -> int:
        if self.nt.kind != "number" or not self.nt.text.isdigit():
            self.error(f"expected a non-negative integer, found {self.describe()}")
        return int(self.advance().text)

    # references

    def reference(self, *kinds: str) -> tuple[str, Token]:
        tok = self.name()
        kind = self.declared.get(tok.text)
        if kind is None:
            self.error(f"unknown name {tok.text}", tok)
        if kinds and kind not in kinds:
            self.error(f"{tok.text} is a {kind}, expected {' or '.join(kinds)}", tok)
        return tok.text, tok

    def declare(self, tok: Token, kind: str, value):
        if tok.text in self.declared:
            self.error(f"duplicate name {tok.text}", tok)
        self.declared[tok.text] = kind
        self.doc_parts[kind][tok.text] = value

    # grammar

    def document(self) -> SpecDocument:
        while not self.is_kw("main"):
            if self.is_kw("domain"):
                self.domain_decl()
            elif self.is_kw("expr"):
                self.expr_decl()
            elif self.is_kw("unit"):
                self.unit_decl()
            elif self.is_kw("network"):
                self.network_decl()
            else:
                self.error(f"expected a declaration or 'main', found {self.describe()}")
        self.expect_kw("main")
        self.expect("=")
        main, _ = self.reference()
        self.expect(";")
        if self.nt.kind != "eof":
            self.error(f"unexpected {self.describe()} after main")
        return SpecDocument(
            main=main,
            domains=self.doc_parts["domain"],
            exprs=self.doc_parts["expr"],
            units=self.doc_parts["unit"],
            networks=self.doc_parts["network"],
        )

    def vector(self) -> tuple[list[float], Token]:
        start = self.expect("[")
        values = [self.number()]
        while self.is_punct(","):
            self.advance()
            values.append(self.number())
        self.expect("]")
        return values, start

    def domain_decl(self):
        self.expect_kw("domain")
        tok = self.name()
        self.expect("{")
        self.expect_kw("center")
        self.expect("=")
        centers, _ = self.vector()
        self.expect(";")
        self.expect_kw("width")
        self.expect("=")
        widths, wtok = self.vector()
        self.expect(";")
        self.expect("}")
        if len(centers) != len(widths):
            self.error(
                f"center/width length mismatch: {len(centers)} centers, {len(widths)} widths",
                wtok,
            )
        for w in widths:
            if not w > 0:
                self.error(f"width must be positive, got {w!r}", wtok)
        self.declare(tok, "domain", HyperRectDomain(tuple(centers), tuple(widths)))

    def expr_decl(self):
        self.expect_kw("expr")
        tok = self.name()
        self.expect("=")
        e = self.or_expr()
        self.expect(";")
        self.declare(tok, "expr", e)

    def or_expr(self) -> BoolExpr:
        parts = [self.and_expr()]
        while self.is_punct("|"):
            self.advance()
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_expr(self) -> BoolExpr:
        parts = [self.not_expr()]
        while self.is_punct("&"):
            self.advance()
            parts.append(self.not_expr())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def not_expr(self) -> BoolExpr:
        if self.is_punct("!"):
            self.advance()
            return Not(self.not_expr())
        if self.is_punct("("):
            self.advance()
            e = self.or_expr()
            self.expect(")")
            return e
        if self.is_kw("rect"):
            return self.pred()
        self.error(f"expected 'rect', '!' or '(', found {self.describe()}")

    def pred(self) -> Pred:
        self.expect_kw("rect")
        self.expect("(")
        self.expect_kw("x")
        self.expect("[")
        axis = self.integer()
        self.expect("]")
        self.expect(",")
        self.expect_kw("center")
        self.expect("=")
        center = self.number()
        self.expect(",")
        self.expect_kw("width")
        self.expect("=")
        wtok = self.nt
        width = self.number()
        self.expect(")")
        if not width > 0:
            self.error(f"width must be positive, got {width!r}", wtok)
        return Pred(axis, RectPredicate(center, width))

    def options(self, allowed: bool) -> dict[str, float]:
        opts: dict[str, float] = {}
        while self.is_punct(","):
            self.advance()
            tok = self.name()
            if not allowed or tok.text not in ("t", "tl"):
                self.error(f"unknown option {tok.text}", tok)
            if tok.text in opts:
                self.error(f"option {tok.text} given twice", tok)
            self.expect("=")
            opts[tok.text] = self.number()
        return opts

    def name_list(self, kind: str) -> list[tuple[str, Token]]:
        refs = [self.reference(kind)]
        while self.is_punct(",") and not (self.peek(1).kind == "ident"
                                          and self.peek(2).text == "="):
            self.advance()
            refs.append(self.reference(kind))
        return refs

    def check_shared_arity(self, refs: list[tuple[str, Token]]):
        first = self.doc_parts["domain"][refs[0][0]].arity
        for ref, tok in refs[1:]:
            n = self.doc_parts["domain"][ref].arity
            if n != first:
                self.error(f"arity mismatch: {ref} has {n} axes, expected {first}", tok)

    def unit_decl(self):
        self.expect_kw("unit")
        tok = self.name()
        self.expect("=")
        head = self.nt
        if self.is_kw("selective") or self.is_kw("expr"):
            kind = self.advance().text
            self.expect("(")
            ref, _ = self.reference("domain" if kind == "selective" else "expr")
            opts = self.options(True)
            self.expect(")")
            decl = UnitDecl(kind, (ref,), t=opts.get("t"), tl=opts.get("tl"))
        elif self.is_kw("truth"):
            self.advance()
            self.expect("(")
            stok = self.nt
            if stok.kind != "string":
                self.error(f"expected a quoted bitstring, found {self.describe()}")
            self.advance()
            bits = stok.text[1:-1]
            try:
                TruthTable.from_string(bits)
            except ValueError as exc:
                self.error(str(exc), stok)
            self.expect(")")
            decl = UnitDecl("truth", table=bits)
        elif self.is_kw("multidomain"):
            self.advance()
            self.expect("(")
            refs = self.name_list("domain")
            self.check_shared_arity(refs)
            opts = self.options(True)
            self.expect(")")
            decl = UnitDecl("multidomain", tuple(r for r, _ in refs),
                            t=opts.get("t"), tl=opts.get("tl"))
        else:
            self.error(f"expected selective, expr, truth or multidomain, found {self.describe()}")
        t = decl.t if decl.t is not None else 0.5
        tl = decl.tl if decl.tl is not None else -0.5
        if decl.kind != "truth" and not tl < t:
            self.error(f"thresholds need tl < t, got tl={tl!r}, t={t!r}", head)
        self.expect(";")
        self.declare(tok, "unit", decl)

    def network_decl(self):
        self.expect_kw("network")
        tok = self.name()
        self.expect("=")
        self.expect_kw("or")
        self.expect("(")
        refs = self.name_list("domain")
        self.check_shared_arity(refs)
        self.expect(")")
        self.expect(";")
        self.declare(tok, "network", NetworkDecl(tuple(r for r, _ in refs)))


def parse(text: str) -> SpecDocument:
    return Parser(text).document()


def load(path) -> SpecDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serializer ------------------------------------------------------------------


def format_number(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _vec(values) -> str:
    return "[" + ", ".join(format_number(v) for v in values) + "]"


def format_expr(e: BoolExpr) -> str:
    if isinstance(e, Pred):
        return (f"rect(x[{e.axis}], center = {format_number(e.pred.center)}, "
                f"width = {format_number(e.pred.width)})")
    if isinstance(e, Not):
        inner = format_expr(e.child)
        return "!" + (inner if isinstance(e.child, (Pred, Not)) else f"({inner})")
    if isinstance(e, And):
        return " & ".join(
            format_expr(c) if isinstance(c, (Pred, Not)) else f"({format_expr(c)})"
            for c in e.children
        )
    return " | ".join(
        f"({format_expr(c)})" if isinstance(c, Or) else format_expr(c)
        for c in e.children
    )


def _unit_text(decl: UnitDecl) -> str:
    if decl.kind == "truth":
        return f'truth("{decl.table}")'
    args = list(decl.refs)
    if decl.t is not None:
        args.append(f"t = {format_number(decl.t)}")
    if decl.tl is not None:
        args.append(f"tl = {format_number(decl.tl)}")
    return f"{decl.kind}({', '.join(args)})"


def serialize(doc: SpecDocument) -> str:
    lines = []
    for name in sorted(doc.domains):
        d = doc.domains[name]
        lines.append(f"domain {name} {{ center = {_vec(d.centers)}; width = {_vec(d.widths)}; }}")
    for name in sorted(doc.exprs):
        lines.append(f"expr {name} = {format_expr(doc.exprs[name])};")
    for name in sorted(doc.units):
        lines.append(f"unit {name} = {_unit_text(doc.units[name])};")
    for name in sorted(doc.networks):
        lines.append(f"network {name} = or({', '.join(doc.networks[name].refs)});")
    lines.append(f"main = {doc.main};")
    return "\n".join(lines) + "\n"


# -- building library objects --------------------------------------------------------


def build_unit(doc: SpecDocument, name: str) -> Receptron:
    decl = doc.units[name]
    if decl.kind == "truth":
        return synthesize_digital(TruthTable.from_string(decl.table))
    if decl.kind == "selective":
        unit = build_selective_receptron(doc.domains[decl.refs[0]])
    elif decl.kind == "expr":
        unit = build_expr_receptron(doc.exprs[decl.refs[0]])
    else:
        unit = build_multidomain_unit([doc.domains[r] for r in decl.refs])
    if decl.t is not None or decl.tl is not None:
        t = decl.t if decl.t is not None else 0.5
        tl = decl.tl if decl.tl is not None else -0.5
        unit = dataclasses.replace(unit, mode=Double(tl, t))
    return unit


def build_network(doc: SpecDocument, name: str) -> Network:
    return build_disjunction_network([doc.domains[r] for r in doc.networks[name].refs])
