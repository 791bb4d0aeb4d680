"""Coefficient fields: exact rationals, prime fields, approximate complex.

Values are plain Python objects (fractions.Fraction, Fp, complex) that
support arithmetic operators directly.  A FieldDescriptor names the field,
parses and renders element literals, samples random elements, and solves
univariate equations.  Complex is an approximate stand-in for an
algebraically closed field: equality there means agreement within eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoRootInField, NonConvergence, ParseError

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Fp:
    """An element of the prime field Z/pZ.

    Arithmetic mixes with plain ints (lifted mod p) but equality requires
    another Fp so hashing stays consistent.
    """

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.v
        if isinstance(other, int):
            return other % self.p
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Fp(o * pow(self.v, -1, self.p), self.p)

    def __pow__(self, e: int):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("inverse of zero in F_p")
            return Fp(pow(self.v, e, self.p), self.p)
        return Fp(pow(self.v, e, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"


@dataclass(frozen=True)
class FieldDescriptor:
    """Identifies a coefficient field and centralizes element handling.

    kind is one of "rational", "prime", "complex".  eps only matters for
    complex and is excluded from equality so descriptors that differ only
    in tolerance still interoperate.
    """

    kind: str
    p: int | None = None
    eps: float = field(default=1e-9, compare=False)

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        text = text.strip()
        if text == "Q":
            return cls("rational")
        if text.startswith("Fp:"):
            body = text[3:]
            if not body.isdigit():
                raise ParseError(f"bad prime field descriptor {text!r}")
            p = int(body)
            if not is_prime(p):
                raise ParseError(f"{p} is not prime")
            return cls("prime", p=p)
        if text == "C":
            return cls("complex")
        if text.startswith("C:"):
            try:
                eps = float(text[2:])
            except ValueError:
                raise ParseError(f"bad tolerance in field descriptor {text!r}") from None
            if not (eps > 0):
                raise ParseError(f"tolerance must be positive in {text!r}")
            return cls("complex", eps=eps)
        raise ParseError(f"unknown field descriptor {text!r}")

    def render(self) -> str:
        if self.kind == "rational":
            return "Q"
        if self.kind == "prime":
            return f"Fp:{self.p}"
        if self.eps != 1e-9:
            return f"C:{self.eps:g}"
        return "C"

    # -- element construction -------------------------------------------

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        if self.kind == "rational":
            return Fraction(k)
        if self.kind == "prime":
            return Fp(k, self.p)
        return complex(k)

    def from_fraction(self, q: Fraction):
        if self.kind == "rational":
            return q
        if self.kind == "prime":
            if q.denominator % self.p == 0:
                raise ParseError(f"denominator {q.denominator} not invertible mod {self.p}")
            return Fp(q.numerator, self.p) / Fp(q.denominator, self.p)
        return complex(q.numerator / q.denominator)

    def parse_literal(self, text: str):
        text = text.strip()
        if self.kind == "complex":
            try:
                return complex(text)
            except ValueError:
                raise ParseError(f"bad complex literal {text!r}") from None
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                q = Fraction(int(num), int(den))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad fraction literal {text!r}") from None
            return self.from_fraction(q)
        try:
            q = Fraction(text)
        except ValueError:
            raise ParseError(f"bad literal {text!r}") from None
        return self.from_fraction(q)

    def render_value(self, v) -> str:
        if self.kind == "prime":
            return str(v.v)
        if self.kind == "complex":
            return repr(v).strip("()")
        return str(v)

    # -- predicates ------------------------------------------------------

    def is_zero(self, v) -> bool:
        if self.kind == "complex":
            return abs(v) <= self.eps
        if self.kind == "prime":
            return v.v == 0
        return v == 0

    def eq(self, a, b) -> bool:
        if self.kind == "complex":
            return abs(a - b) <= self.eps
        return a == b

    def same_field(self, other: "FieldDescriptor") -> bool:
        return self.kind == other.kind and self.p == other.p

    # -- sampling ----------------------------------------------------------

    def sample(self, rng, height: int = 256):
        """Random element.  For rationals the support has ~0.6*2*height^2
        distinct values, so the default height keeps it above 2^16."""
        if self.kind == "rational":
            return Fraction(rng.randint(-height, height), rng.randint(1, height))
        if self.kind == "prime":
            return Fp(rng.randrange(self.p), self.p)
        return complex(rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0))

    def sample_nonzero(self, rng, height: int = 256):
        while True:
            v = self.sample(rng, height)
            if not self.is_zero(v):
                return v


def split_sign(desc: FieldDescriptor, c):
    """Split a coefficient into (sign, magnitude text) for term rendering.

    An empty magnitude means 1, so callers can drop the '*'.  Prime-field
    values and complex values with nonzero real and imaginary parts never
    get a minus pulled out.
    """
    if desc.kind == "rational":
        sign = -1 if c < 0 else 1
        mag = abs(c)
        return sign, "" if mag == 1 else str(mag)
    if desc.kind == "prime":
        return 1, "" if c.v == 1 else str(c.v)
    if c.imag == 0:
        sign = -1 if c.real < 0 else 1
        mag = abs(c.real)
        return sign, "" if mag == 1 else repr(mag)
    if c.real == 0:
        sign = -1 if c.imag < 0 else 1
        return sign, f"{abs(c.imag)!r}j"
    inner = f"{c.real!r}{'+' if c.imag > 0 else '-'}{abs(c.imag)!r}j"
    return 1, f"({inner})"


# -- univariate root finding ---------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


def _horner(coeffs, u):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * u + c
    return acc


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of sum coeffs[k] u^k (coeffs not all zero)."""
    g = list(coeffs)
    while g and g[-1] == 0:
        g.pop()
    roots = set()
    k0 = 0
    while k0 < len(g) and g[k0] == 0:
        k0 += 1
    if k0 > 0 and k0 < len(g):
        roots.add(Fraction(0))
        g = g[k0:]
    if len(g) <= 1:
        return sorted(roots)
    scale = math.lcm(*(c.denominator for c in g))
    ints = [int(c * scale) for c in g]
    content = math.gcd(*ints)
    ints = [c // content for c in ints]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            if math.gcd(num, den) != 1:
                continue
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if _horner(g, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _durand_kerner(coeffs: list[complex], rng, iters: int):
    """Simultaneous root iteration on a monic-normalized polynomial.
    Returns the root list on convergence, None otherwise."""
    d = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]

    def ev(z):
        acc = 0j
        for c in reversed(monic):
            acc = acc * z + c
        return acc

    radius = 1.0 + max(abs(c) for c in monic[:-1]) if d > 0 else 1.0
    base = complex(0.4, 0.9)
    roots = []
    for k in range(d):
        jitter = complex(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05))
        roots.append(base ** (k + 1) * radius + jitter)
    for _ in range(iters):
        moved = 0.0
        nxt = list(roots)
        for i in range(d):
            den = 1 + 0j
            for j in range(d):
                if j != i:
                    den *= roots[i] - roots[j]
            if den == 0:
                den = complex(rng.uniform(1e-12, 1e-9), rng.uniform(1e-12, 1e-9))
            delta = ev(roots[i]) / den
            nxt[i] = roots[i] - delta
            moved = max(moved, abs(delta))
        roots = nxt
        if moved < 1e-13:
            return roots
    return None


def solve_univariate(desc: FieldDescriptor, coeffs: list, target, rng,
                     restarts: int = 5, iters: int = 500, root_tol: float = 1e-9):
    """Solve sum coeffs[k] u^k = target for u in the field.

    Exhaustive over prime fields, rational-root search over Q,
    Durand-Kerner over complex.  When several roots exist one is chosen
    uniformly at random so retrying callers explore all of them.
    Raises NoRootInField / NonConvergence.
    """
    g = list(coeffs)
    if not g:
        g = [desc.zero()]
    g[0] = g[0] - target

    if desc.kind == "prime":
        zero = desc.zero()
        roots = [Fp(u, desc.p) for u in range(desc.p)
                 if _horner(g, Fp(u, desc.p)) == zero]
        if not roots:
            raise NoRootInField(f"no root in F_{desc.p}")
        return roots[rng.randrange(len(roots))]

    if desc.kind == "rational":
        if all(c == 0 for c in g):
            return desc.sample(rng)
        roots = _rational_roots(g)
        if not roots:
            raise NoRootInField("no rational root")
        return roots[rng.randrange(len(roots))]

    # complex
    trimmed = list(g)
    while trimmed and abs(trimmed[-1]) <= desc.eps:
        trimmed.pop()
    if not trimmed:
        return desc.sample(rng)
    if len(trimmed) == 1:
        raise NoRootInField("nonzero constant equation over C")
    scale = max(1.0, max(abs(c) for c in trimmed))
    for _ in range(restarts):
        roots = _durand_kerner(trimmed, rng, iters)
        if roots is None:
            continue
        good = [z for z in roots if abs(_horner(trimmed, z)) <= root_tol * scale]
        if good:
            return good[rng.randrange(len(good))]
    raise NonConvergence("root iteration did not converge")
