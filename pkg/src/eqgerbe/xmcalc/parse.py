"""Recursive-descent parser for fibre expressions such as ``K(w0) * Kd(ad(inv(g2), w1))``."""

from __future__ import annotations

import re

from . import words as W

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),*])|(?P<bad>\S))")
_KGEN = re.compile(r"w[0-9]+\Z")
_LGEN = re.compile(r"g[0-9]+\Z")


def _tokenize(text):
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad") is not None:
            raise W.ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "name" if m.group("name") is not None else "punct"
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            shown = tok[1] if tok[0] != "end" else "end of input"
            raise W.ParseError(f"expected {value!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] == "*":
            self.take("*")
            terms.append(self.term())
        self.take_end()
        return W.FiberExpr(tuple(terms))

    def take_end(self):
        tok = self.peek()
        if tok[0] != "end":
            raise W.ParseError(f"unexpected {tok[1]!r}", tok[2])

    def term(self):
        kind, val, pos = self.take()
        if val not in ("K", "Kd"):
            raise W.ParseError(f"expected K( or Kd(, found {val or 'end of input'!r}", pos)
        self.take("(")
        w = self.word(W.K)
        self.take(")")
        return (w, 1 if val == "K" else -1)

    def word(self, sort):
        kind, val, pos = self.take()
        if kind != "name":
            raise W.ParseError(f"expected a word, found {val or 'end of input'!r}", pos)
        if _KGEN.match(val) or _LGEN.match(val):
            gsort = W.K if val.startswith("w") else W.L
            if gsort != sort:
                raise W.SortError(f"{gsort}-generator {val} where a {sort}-word is required", pos)
            return W.Gen(sort, val, pos)
        if val == "one":
            return W.One(sort, pos)
        if val == "mul":
            self.take("(")
            a = self.word(sort)
            self.take(",")
            b = self.word(sort)
            self.take(")")
            return W.Mul(sort, a, b, pos)
        if val == "inv":
            self.take("(")
            a = self.word(sort)
            self.take(")")
            return W.Inv(sort, a, pos)
        if val == "t":
            if sort != W.L:
                raise W.SortError("t(...) is an L-word; use it only inside L-positions", pos)
            self.take("(")
            a = self.word(W.K)
            self.take(")")
            return W.Embed(a, pos)
        if val == "ad":
            if sort != W.K:
                raise W.SortError("ad(...) is a K-word; embed it with t(...) in L-positions", pos)
            self.take("(")
            l = self.word(W.L)
            self.take(",")
            k = self.word(W.K)
            self.take(")")
            return W.Ad(l, k, pos)
        raise W.ParseError(f"unknown symbol {val!r}", pos)


def parse(text):
    """Parse a fibre expression. An empty (or all-whitespace) string is the empty product."""
    p = _Parser(text)
    if p.peek()[0] == "end":
        return W.FiberExpr(())
    return p.expr()


def parse_word(text, sort=W.K):
    """Parse a single K-word (default) or L-word."""
    p = _Parser(text)
    w = p.word(sort)
    p.take_end()
    return w
