"""Noncommutative polynomials with zero constant term.

Monomials are words over x1..xm, stored as tuples of 1-based variable
indices; a polynomial is a sparse map from words to nonzero coefficients.
The empty word (a constant term) is rejected at construction since every
operation downstream assumes it is absent.
"""

from __future__ import annotations

from itertools import groupby

from . import parsing
from .errors import ArityMismatch, ConstantTermError, FieldMismatch, ParseError, VariableOutOfRange
from .fields import FieldDescriptor, split_sign

Word = tuple  # tuple of 1-based variable indices, nonempty


class NcPolynomial:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldDescriptor, nvars: int, terms: dict):
        clean = {}
        for word, coeff in terms.items():
            if len(word) == 0:
                if not field.is_zero(coeff):
                    raise ConstantTermError("nonzero constant term")
                continue
            for i in word:
                if not (1 <= i <= nvars):
                    raise VariableOutOfRange(f"x{i} outside x1..x{nvars}")
            if not field.is_zero(coeff):
                clean[tuple(word)] = coeff
        self.field = field
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldDescriptor, nvars: int) -> "NcPolynomial":
        return cls(field, nvars, {})

    @classmethod
    def variable(cls, field: FieldDescriptor, nvars: int, i: int) -> "NcPolynomial":
        if not (1 <= i <= nvars):
            raise VariableOutOfRange(f"x{i} outside x1..x{nvars}")
        return cls(field, nvars, {(i,): field.one()})

    @classmethod
    def parse(cls, text: str, field: FieldDescriptor, nvars: int | None = None) -> "NcPolynomial":
        builder = _FreeBuilder(field)
        raw = parsing.parse_text(text, builder)
        const = raw.pop((), None)
        if const is not None and not field.is_zero(const):
            raise ConstantTermError(
                f"polynomial has constant term {field.render_value(const)}")
        m = builder.max_index if nvars is None else nvars
        if nvars is not None and builder.max_index > nvars:
            raise VariableOutOfRange(
                f"x{builder.max_index} outside declared x1..x{nvars}")
        return cls(field, m, raw)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            key = tuple(sorted(self.terms.items()))
            self._hash = hash((self.field, self.nvars, key))
        return self._hash

    def _check(self, other: "NcPolynomial") -> int:
        if not self.field.same_field(other.field):
            raise FieldMismatch(
                f"{self.field.render()} vs {other.field.render()}")
        return max(self.nvars, other.nvars)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        m = self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, self.field.zero()) + c
        return NcPolynomial(self.field, m, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NcPolynomial(self.field, self.nvars,
                            {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        m = self._check(other)
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                prod = c1 * c2
                if w in terms:
                    terms[w] = terms[w] + prod
                else:
                    terms[w] = prod
        return NcPolynomial(self.field, m, terms)

    def scale(self, c) -> "NcPolynomial":
        return NcPolynomial(self.field, self.nvars,
                            {w: c * v for w, v in self.terms.items()})

    # -- evaluation -----------------------------------------------------------

    def eval_scalar(self, point):
        """Evaluate at a tuple of field scalars (commutative case)."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} values, got {len(point)}")
        acc = self.field.zero()
        for word, coeff in self.terms.items():
            prod = coeff
            for i in word:
                prod = prod * point[i - 1]
            acc = acc + prod
        return acc

    # -- rendering ------------------------------------------------------------

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            body = "*".join(
                f"x{i}^{k}" if (k := len(list(run))) > 1 else f"x{i}"
                for i, run in groupby(word))
            sign, coeff_text = split_sign(self.field, self.terms[word])
            text = f"{coeff_text}*{body}" if coeff_text else body
            if not pieces:
                pieces.append(("-" if sign < 0 else "") + text)
            else:
                pieces.append((" - " if sign < 0 else " + ") + text)
        return "".join(pieces)

    def __repr__(self):
        return f"NcPolynomial({self.field.render()}, m={self.nvars}, {self.pretty()})"


class _FreeBuilder(parsing.Builder):
    def __init__(self, field: FieldDescriptor):
        self.field = field
        self.max_index = 0

    def const(self, text: str):
        return {(): self.field.parse_literal(text)}

    def var(self, token: parsing.Token):
        if token.kind != "VAR":
            raise ParseError(f"{token.text!r} is not a free variable", token.pos)
        i = token.payload
        if i < 1:
            raise ParseError("variable indices start at 1", token.pos)
        self.max_index = max(self.max_index, i)
        return {(i,): self.field.one()}

    def add(self, a, b):
        out = dict(a)
        for w, c in b.items():
            out[w] = out.get(w, self.field.zero()) + c
        return out

    def neg(self, a):
        return {w: -c for w, c in a.items()}

    def mul(self, a, b):
        out = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                w = w1 + w2
                prod = c1 * c2
                if w in out:
                    out[w] = out[w] + prod
                else:
                    out[w] = prod
        return out


def commutator(a: NcPolynomial, b: NcPolynomial) -> NcPolynomial:
    return a * b - b * a
