"""Concrete syntax: definition files and terms.

    file    := typedecl attrblock* rule*
    typedecl:= "type" IDENT "=" ctor ("|" ctor)*
    ctor    := IDENT [ "(" sort ("," sort)* ")" ]
    attrblock := "with" IDENT ":" attr ("," attr)*
    attr    := "associative" ["left" | "right"] | "commutative"
             | "neutral" "(" IDENT ")" | "inverse" "(" IDENT ")"
             | "idempotent" | "nilpotent" "(" IDENT ")"
    rule    := "rule" term "->" term
    term    := IDENT | IDENT "(" term ("," term)* ")" | INT | STRING

Constructor names start with an uppercase letter, variables (in rules) with a
lowercase one.  `#` starts a comment that runs to the end of the line.
Whitespace is otherwise insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError
from .terms import App, Prim, Signature, Term, Var
from .theory import (
    Assoc,
    Attr,
    Com,
    Idem,
    Inv,
    Neu,
    Nil,
    RewriteRule,
    TheorySpec,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<punct>[(),|:=])
""",
    re.VERBOSE,
)

_KEYWORDS = {
    "type",
    "with",
    "rule",
    "associative",
    "commutative",
    "neutral",
    "inverse",
    "idempotent",
    "nilpotent",
    "left",
    "right",
}


@dataclass(frozen=True)
class Token:
    kind: str  # arrow | int | ident | string | punct | eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        i = m.end()
    out.append(Token("eof", "", line, col))
    return out


def _unquote(s: str, line: int, col: int) -> str:
    body = s[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            i += 1
            if i >= len(body) or body[i] not in '"\\':
                raise ParseError("bad string escape", line, col)
            c = body[i]
        out.append(c)
        i += 1
    return "".join(out)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def bump(self) -> Token:
        t = self.cur
        self.pos += 1
        return t

    def fail(self, message: str, code: str = "syntax", tok: Optional[Token] = None):
        t = tok or self.cur
        raise ParseError(message, t.line, t.col, code)

    def expect_punct(self, ch: str) -> Token:
        if self.cur.kind == "punct" and self.cur.text == ch:
            return self.bump()
        self.fail(f"expected {ch!r}")

    def expect_keyword(self, word: str) -> Token:
        if self.cur.kind == "ident" and self.cur.text == word:
            return self.bump()
        self.fail(f"expected {word!r}")

    def expect_name(self, what: str) -> Token:
        if self.cur.kind != "ident":
            self.fail(f"expected {what}")
        if self.cur.text in _KEYWORDS:
            self.fail(f"{self.cur.text!r} is a keyword, not a {what}")
        return self.bump()

    def at_keyword(self, word: str) -> bool:
        return self.cur.kind == "ident" and self.cur.text == word

    # ---- terms ------------------------------------------------------------

    def term(self, allow_vars: bool) -> Term:
        t = self.cur
        if t.kind == "int":
            self.bump()
            return Prim("int", int(t.text))
        if t.kind == "string":
            self.bump()
            return Prim("string", _unquote(t.text, t.line, t.col))
        if t.kind != "ident":
            self.fail("expected a term")
        if t.text in _KEYWORDS:
            self.fail(f"{t.text!r} is a keyword, not a term")
        self.bump()
        if t.text[0].islower() or t.text[0] == "_":
            if not allow_vars:
                self.fail(
                    f"variable {t.text!r} not allowed in a ground term",
                    code="variable-in-ground-term",
                    tok=t,
                )
            return Var(t.text, "")  # sort resolved against the signature later
        args: list[Term] = []
        if self.cur.kind == "punct" and self.cur.text == "(":
            self.bump()
            args.append(self.term(allow_vars))
            while self.cur.kind == "punct" and self.cur.text == ",":
                self.bump()
                args.append(self.term(allow_vars))
            self.expect_punct(")")
        return App(t.text, tuple(args))


def _resolve_sorts(sig: Signature, t: Term, expected: str, env: dict[str, str],
                   line: int, col: int) -> Term:
    """Fill in variable sorts top-down and check constructor usage."""
    if isinstance(t, Var):
        prior = env.setdefault(t.name, expected)
        if prior != expected:
            raise ParseError(
                f"variable {t.name!r} used at sorts {prior!r} and {expected!r}",
                line, col, "sort",
            )
        return Var(t.name, expected)
    if isinstance(t, Prim):
        if t.ptype != expected:
            raise ParseError(f"{t} is not of sort {expected!r}", line, col, "sort")
        return t
    if t.ctor not in sig:
        raise ParseError(
            f"unknown constructor {t.ctor!r}", line, col, "unknown-constructor"
        )
    decl = sig.declaration(t.ctor)
    if decl.result_sort != expected:
        raise ParseError(
            f"{t.ctor!r} builds sort {decl.result_sort!r}, expected {expected!r}",
            line, col, "sort",
        )
    if len(t.args) != decl.arity:
        raise ParseError(
            f"{t.ctor!r} expects {decl.arity} arguments, got {len(t.args)}",
            line, col, "arity",
        )
    args = tuple(
        _resolve_sorts(sig, a, s, env, line, col)
        for a, s in zip(t.args, decl.arg_sorts)
    )
    return App(t.ctor, args)


def parse_ground_term(text: str, sig: Signature) -> Term:
    """Parse one ground term of the data sort (as on the norm command line)."""
    p = _Parser(text)
    start = p.cur
    t = p.term(allow_vars=False)
    if p.cur.kind != "eof":
        p.fail("trailing input after term")
    return _resolve_sorts(sig, t, sig.rdt_sort, {}, start.line, start.col)


def _parse_attr(p: _Parser) -> Attr:
    t = p.cur
    if t.kind != "ident":
        p.fail("expected an attribute")
    word = t.text
    p.bump()
    if word == "associative":
        orientation = "right"
        if p.at_keyword("left") or p.at_keyword("right"):
            orientation = p.bump().text
        return Assoc(orientation)
    if word == "commutative":
        return Com()
    if word == "idempotent":
        return Idem()
    if word in ("neutral", "inverse", "nilpotent"):
        p.expect_punct("(")
        name = p.expect_name("constructor name")
        p.expect_punct(")")
        if word == "neutral":
            return Neu(name.text)
        if word == "inverse":
            return Inv(name.text)
        return Nil(name.text)
    p.fail(f"unknown attribute {word!r}", code="unknown-attribute", tok=t)


def parse_definition(text: str) -> tuple[Signature, TheorySpec]:
    """Parse a definition file into its signature and theory spec.

    Raises ParseError with line/column and a stable code; acceptance by
    theory.classify is the caller's next step.
    """
    p = _Parser(text)
    p.expect_keyword("type")
    sort_tok = p.expect_name("sort name")
    p.expect_punct("=")

    ctors: list[tuple[str, list[str]]] = []
    seen: dict[str, Token] = {}
    while True:
        name = p.expect_name("constructor name")
        if not name.text[0].isupper():
            p.fail(
                f"constructor names start uppercase: {name.text!r}",
                code="constructor-case",
                tok=name,
            )
        if name.text in seen:
            p.fail(
                f"duplicate constructor {name.text!r}",
                code="duplicate-constructor",
                tok=name,
            )
        seen[name.text] = name
        arg_sorts: list[str] = []
        if p.cur.kind == "punct" and p.cur.text == "(":
            p.bump()
            while True:
                s = p.bump()
                if s.kind != "ident":
                    p.fail("expected a sort name", tok=s)
                if s.text not in (sort_tok.text, "int", "string"):
                    p.fail(f"unknown sort {s.text!r}", code="unknown-sort", tok=s)
                arg_sorts.append(s.text)
                if p.cur.kind == "punct" and p.cur.text == ",":
                    p.bump()
                    continue
                break
            p.expect_punct(")")
        ctors.append((name.text, arg_sorts))
        if p.cur.kind == "punct" and p.cur.text == "|":
            p.bump()
            continue
        break

    sig = Signature(sort_tok.text, ctors)

    attrs: dict[str, tuple[Attr, ...]] = {}
    while p.at_keyword("with"):
        p.bump()
        name = p.expect_name("constructor name")
        if name.text not in sig:
            p.fail(
                f"unknown constructor {name.text!r}",
                code="unknown-constructor",
                tok=name,
            )
        if name.text in attrs:
            p.fail(
                f"duplicate attribute block for {name.text!r}",
                code="duplicate-attr-block",
                tok=name,
            )
        p.expect_punct(":")
        block = [_parse_attr(p)]
        while p.cur.kind == "punct" and p.cur.text == ",":
            p.bump()
            block.append(_parse_attr(p))
        attrs[name.text] = tuple(block)

    rules: list[RewriteRule] = []
    while p.at_keyword("rule"):
        p.bump()
        start = p.cur
        lhs = p.term(allow_vars=True)
        if p.cur.kind != "arrow":
            p.fail("expected '->'")
        p.bump()
        rhs = p.term(allow_vars=True)
        if isinstance(lhs, (Var, Prim)):
            raise ParseError(
                "rule left-hand side must be headed by a constructor",
                start.line, start.col, "rule-lhs",
            )
        env: dict[str, str] = {}
        lhs = _resolve_sorts(sig, lhs, sig.rdt_sort, env, start.line, start.col)
        lhs_vars = set(env)
        rhs = _resolve_sorts(sig, rhs, sig.rdt_sort, env, start.line, start.col)
        extra = set(env) - lhs_vars
        if extra:
            raise ParseError(
                f"rule right-hand side uses unbound variables {sorted(extra)}",
                start.line, start.col, "rule-vars",
            )
        rules.append(RewriteRule(lhs, rhs))

    if p.cur.kind != "eof":
        p.fail("expected 'with', 'rule', or end of file")

    return sig, TheorySpec(attrs=attrs, rules=tuple(rules))
