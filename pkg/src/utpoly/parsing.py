"""Shared lexer and recursive-descent engine for polynomial text.

Grammar (sums of scaled products):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := coeff | [coeff '*'] factor ('*' factor)*
    factor := atom ['^' nat]
    atom   := var | coeff | '(' expr ')'
    coeff  := number ['/' number]

Variables come in two shapes: a letter with a numeric suffix (x1, x12)
and a bracketed form with integer indices (x[1,2,3], z[2,1], y[1,3]).
The engine is shared by the free-algebra parser and the structured
coefficient-polynomial parser; each supplies a builder that decides which
variable shapes are legal and how constants embed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER | VAR | BVAR | OP | END
    text: str
    pos: int
    payload: object = None


def tokenize(text: str) -> list[Token]:
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            if j < n and text[j] == "j":
                j += 1
            out.append(Token("NUMBER", text[i:j], i))
            i = j
            continue
        if ch in "xzy":
            j = i + 1
            if j < n and text[j].isdigit():
                while j < n and text[j].isdigit():
                    j += 1
                if ch != "x":
                    raise ParseError(f"unknown variable {text[i:j]!r}", i)
                out.append(Token("VAR", text[i:j], i, int(text[i + 1:j])))
                i = j
                continue
            if j < n and text[j] == "[":
                k = text.find("]", j)
                if k < 0:
                    raise ParseError("unterminated variable index", j)
                parts = text[j + 1:k].split(",")
                try:
                    idx = tuple(int(s.strip()) for s in parts)
                except ValueError:
                    raise ParseError(f"bad index list {text[j:k+1]!r}", j) from None
                out.append(Token("BVAR", text[i:k + 1], i, (ch, idx)))
                i = k + 1
                continue
            raise ParseError(f"dangling variable letter {ch!r}", i)
        if ch in "+-*^/()":
            out.append(Token("OP", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(Token("END", "", n))
    return out


class Builder:
    """What a parse target must provide. Methods may raise ParseError."""

    def const(self, text: str):
        raise NotImplementedError

    def var(self, token: Token):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError


class _Parser:
    def __init__(self, tokens: list[Token], builder: Builder):
        self.toks = tokens
        self.i = 0
        self.b = builder

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_op(self, chars: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.text in chars

    def expect_op(self, ch: str) -> Token:
        tok = self.take()
        if tok.kind != "OP" or tok.text != ch:
            raise ParseError(f"expected {ch!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self):
        negate = False
        if self.at_op("+-"):
            negate = self.take().text == "-"
        node = self.term()
        if negate:
            node = self.b.neg(node)
        while self.at_op("+-"):
            op = self.take().text
            rhs = self.term()
            node = self.b.add(node, self.b.neg(rhs) if op == "-" else rhs)
        return node

    def term(self):
        if self.peek().kind == "NUMBER":
            c = self.coeff()
            if not self.at_op("*"):
                return self.b.const(c)
            node = self.b.const(c)
        else:
            node = self.factor()
        while self.at_op("*"):
            self.take()
            node = self.b.mul(node, self.factor())
        return node

    def coeff(self) -> str:
        tok = self.take()
        if tok.kind != "NUMBER":
            raise ParseError(f"expected a number, found {tok.text!r}", tok.pos)
        if self.at_op("/"):
            self.take()
            den = self.take()
            if den.kind != "NUMBER" or not den.text.isdigit() or not tok.text.isdigit():
                raise ParseError("fraction parts must be integers", den.pos)
            return tok.text + "/" + den.text
        return tok.text

    def factor(self):
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
        elif tok.kind in ("VAR", "BVAR"):
            node = self.b.var(self.take())
        elif tok.kind == "NUMBER":
            node = self.b.const(self.coeff())
        else:
            raise ParseError(f"expected a variable, number, or '(', found "
                             f"{tok.text or 'end of input'!r}", tok.pos)
        if self.at_op("^"):
            self.take()
            etok = self.take()
            if etok.kind != "NUMBER" or not etok.text.isdigit():
                raise ParseError("exponent must be a nonnegative integer", etok.pos)
            e = int(etok.text)
            if e == 0:
                return self.b.const("1")
            acc = node
            for _ in range(e - 1):
                acc = self.b.mul(acc, node)
            node = acc
        return node


def parse_text(text: str, builder: Builder):
    return _Parser(tokenize(text), builder).parse()
