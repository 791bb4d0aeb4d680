"""Upper triangular matrices and evaluation of free polynomials on them.

Matrices are sparse maps {(j,k): value} with 1 <= j <= k <= n, over either
a concrete field or the polynomial ring in generic-entry variables.  Two
independent evaluation routes are kept side by side on purpose:

  * evaluate       folds matrix products entry by entry,
  * word_product_paths / evaluate_structured reconstruct entries from
    nondecreasing index paths and cached coefficient polynomials.

Their agreement is a strong end-to-end check and is exercised by tests;
do not collapse one into the other.
"""

from __future__ import annotations

from itertools import combinations, product

from .cpoly import CPolynomial, diag_var, entry_var
from .errors import (ArityMismatch, FieldMismatch, ParseError, ResourceLimit,
                     SizeMismatch)
from .fields import FieldDescriptor


class FieldRing:
    """Ring adapter for concrete field entries."""

    kind = "field"

    def __init__(self, desc: FieldDescriptor):
        self.desc = desc

    def zero(self):
        return self.desc.zero()

    def is_zero(self, v) -> bool:
        return self.desc.is_zero(v)

    def scalar(self, c):
        return c

    def eq(self, a, b) -> bool:
        return self.desc.eq(a, b)

    def render(self, v) -> str:
        return self.desc.render_value(v)

    def parse(self, text: str):
        return self.desc.parse_literal(text)

    def check_size(self, total_terms: int):
        pass

    def same(self, other) -> bool:
        return other.kind == "field" and self.desc.same_field(other.desc)


class PolyRing:
    """Ring adapter for symbolic entries, with a monomial budget that
    caps how large any intermediate product may grow."""

    kind = "poly"

    def __init__(self, desc: FieldDescriptor, monomial_budget: int = 10 ** 6):
        self.desc = desc
        self.monomial_budget = monomial_budget

    def zero(self):
        return CPolynomial.zero(self.desc)

    def is_zero(self, v) -> bool:
        return v.is_zero()

    def scalar(self, c):
        return CPolynomial.const(self.desc, c)

    def eq(self, a, b) -> bool:
        return (a - b).is_zero()

    def render(self, v) -> str:
        return v.render()

    def parse(self, text: str):
        return CPolynomial.parse(text, self.desc, kinds="xz")

    def check_size(self, total_terms: int):
        if total_terms > self.monomial_budget:
            raise ResourceLimit(
                f"symbolic matrix grew past {self.monomial_budget} monomials")

    def same(self, other) -> bool:
        return other.kind == "poly" and self.desc.same_field(other.desc)


class UTMatrix:
    __slots__ = ("n", "ring", "entries")

    def __init__(self, ring, n: int, entries: dict):
        clean = {}
        for (j, k), v in entries.items():
            if not (1 <= j <= k <= n):
                raise SizeMismatch(f"entry ({j},{k}) outside upper triangle of size {n}")
            if not ring.is_zero(v):
                clean[(j, k)] = v
        self.ring = ring
        self.n = n
        self.entries = clean

    @classmethod
    def zeros(cls, ring, n: int) -> "UTMatrix":
        return cls(ring, n, {})

    def entry(self, j: int, k: int):
        return self.entries.get((j, k), self.ring.zero())

    def _check(self, other: "UTMatrix"):
        if self.n != other.n:
            raise SizeMismatch(f"sizes {self.n} and {other.n}")
        if not self.ring.same(other.ring):
            raise FieldMismatch("matrices over different rings")

    def __add__(self, other):
        self._check(other)
        entries = dict(self.entries)
        for pos, v in other.entries.items():
            entries[pos] = entries[pos] + v if pos in entries else v
        return UTMatrix(self.ring, self.n, entries)

    def __sub__(self, other):
        return self + other.scale_int(-1)

    def scale(self, c) -> "UTMatrix":
        cc = self.ring.scalar(c)
        return UTMatrix(self.ring, self.n,
                        {pos: cc * v for pos, v in self.entries.items()})

    def scale_int(self, k: int) -> "UTMatrix":
        return self.scale(self.ring.desc.from_int(k))

    def __matmul__(self, other):
        self._check(other)
        entries = {}
        for (j, l), a in self.entries.items():
            for k in range(l, self.n + 1):
                b = other.entries.get((l, k))
                if b is None:
                    continue
                prod = a * b
                pos = (j, k)
                entries[pos] = entries[pos] + prod if pos in entries else prod
        out = UTMatrix(self.ring, self.n, entries)
        if self.ring.kind == "poly":
            self.ring.check_size(sum(len(v.terms) for v in out.entries.values()))
        return out

    def in_band(self, t: int) -> bool:
        """True when every entry with k - j <= t vanishes.  Band -1 is the
        whole algebra, band 0 the strictly upper matrices, band n-1 zero."""
        return all(k - j > t for j, k in self.entries)

    def band_level(self) -> int:
        """Largest t with the matrix in band t (n-1 for the zero matrix)."""
        if not self.entries:
            return self.n - 1
        return min(k - j for j, k in self.entries) - 1

    def eq(self, other: "UTMatrix") -> bool:
        self._check(other)
        for pos in set(self.entries) | set(other.entries):
            if not self.ring.eq(self.entry(*pos), other.entry(*pos)):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ring": self.ring.kind,
            "entries": [
                {"j": j, "k": k, "value": self.ring.render(v)}
                for (j, k), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict, desc: FieldDescriptor,
                  monomial_budget: int = 10 ** 6) -> "UTMatrix":
        try:
            n = int(data["n"])
            kind = data.get("ring", "field")
            raw = data.get("entries", [])
        except (TypeError, KeyError) as exc:
            raise ParseError(f"bad matrix object: missing {exc}") from None
        if kind == "field":
            ring = FieldRing(desc)
        elif kind == "poly":
            ring = PolyRing(desc, monomial_budget)
        else:
            raise ParseError(f"unknown ring kind {kind!r}")
        entries = {}
        for item in raw:
            try:
                j, k, text = int(item["j"]), int(item["k"]), item["value"]
            except (TypeError, KeyError) as exc:
                raise ParseError(f"bad matrix entry: missing {exc}") from None
            entries[(j, k)] = ring.parse(text)
        return cls(ring, n, entries)

    def __repr__(self):
        cells = ", ".join(f"({j},{k})={self.ring.render(v)}"
                          for (j, k), v in sorted(self.entries.items()))
        return f"UTMatrix(n={self.n}, {cells or '0'})"


# -- evaluation of free polynomials --------------------------------------------


def _check_tuple(p, matrices):
    if len(matrices) != p.nvars:
        raise ArityMismatch(f"{p.nvars} variables but {len(matrices)} matrices")
    if not matrices:
        return None
    first = matrices[0]
    for a in matrices:
        if a.n != first.n:
            raise SizeMismatch("matrices of mixed sizes")
        if not a.ring.same(first.ring):
            raise FieldMismatch("matrices over mixed rings")
    if not first.ring.desc.same_field(p.field):
        raise FieldMismatch(
            f"polynomial over {p.field.render()}, matrices over "
            f"{first.ring.desc.render()}")
    return first.ring


def word_product(matrices, word) -> UTMatrix:
    """Fold of matrix products A_{i_1} @ ... @ A_{i_w}."""
    acc = matrices[word[0] - 1]
    for i in word[1:]:
        acc = acc @ matrices[i - 1]
    return acc


def word_product_paths(matrices, word) -> UTMatrix:
    """Same product, rebuilt entrywise from nondecreasing index paths:
    entry (s,t) sums the arc products of all s = j_1 <= ... <= j_{w+1} = t.
    Kept as an independent cross-check for word_product."""
    ring = matrices[0].ring
    n = matrices[0].n
    w = len(word)
    entries = {}
    for s in range(1, n + 1):
        for t in range(s, n + 1):
            total = ring.zero()
            stack = [(s, 0, None)]
            # iterative DFS over path positions; value None means "empty product"
            while stack:
                j, step, val = stack.pop()
                if step == w:
                    if j == t:
                        total = total + (ring.scalar(ring.desc.one()) if val is None else val)
                    continue
                a = matrices[word[step] - 1]
                for nxt in range(j, t + 1):
                    f = a.entries.get((j, nxt))
                    if f is None:
                        continue
                    stack.append((nxt, step + 1, f if val is None else val * f))
            if not ring.is_zero(total):
                entries[(s, t)] = total
    return UTMatrix(ring, n, entries)


def evaluate(p, matrices, use_paths: bool = False) -> UTMatrix:
    """Evaluate p at a tuple of upper triangular matrices."""
    ring = _check_tuple(p, matrices)
    if ring is None or not p.terms:
        n = matrices[0].n if matrices else 0
        if not matrices:
            raise ArityMismatch("cannot evaluate with an empty matrix tuple")
        return UTMatrix.zeros(matrices[0].ring, n)
    prod = word_product_paths if use_paths else word_product
    acc = UTMatrix.zeros(ring, matrices[0].n)
    for word, coeff in p.terms.items():
        acc = acc + prod(matrices, word).scale(coeff)
    return acc


def generic_matrix(ring: PolyRing, n: int, i: int) -> UTMatrix:
    entries = {}
    for j in range(1, n + 1):
        entries[(j, j)] = CPolynomial.variable(ring.desc, diag_var(j, i))
        for k in range(j + 1, n + 1):
            entries[(j, k)] = CPolynomial.variable(ring.desc, entry_var(j, k, i))
    return UTMatrix(ring, n, entries)


def generic_tuple(field: FieldDescriptor, n: int, m: int,
                  monomial_budget: int = 10 ** 6) -> list[UTMatrix]:
    ring = PolyRing(field, monomial_budget)
    return [generic_matrix(ring, n, i) for i in range(1, m + 1)]


_GENERIC_CACHE: dict = {}


def generic_evaluate(p, n: int, monomial_budget: int = 10 ** 6) -> UTMatrix:
    """p at the generic tuple of size n; cached since order probing,
    coefficient extraction, and the solver all revisit the same matrix."""
    key = (p, n)
    hit = _GENERIC_CACHE.get(key)
    if hit is not None:
        return hit
    out = evaluate(p, generic_tuple(p.field, n, max(p.nvars, 1), monomial_budget))
    if len(_GENERIC_CACHE) > 128:
        _GENERIC_CACHE.clear()
    _GENERIC_CACHE[key] = out
    return out


def evaluate_structured(p, matrices) -> UTMatrix:
    """Entrywise evaluation through coefficient polynomials.

    Diagonal entries are the scalar values p(a_11, ..., a_nn).  Entry (s,t)
    above the diagonal sums, over strictly increasing paths s = j_1 < ... <
    j_{k+1} = t and slot tuples (i_1..i_k), the coefficient polynomial at
    the path's diagonal tuple times the product of the slotted arc entries.
    """
    from .analysis import coeff_poly

    ring = _check_tuple(p, matrices)
    if ring is None or ring.kind != "field":
        raise FieldMismatch("structured evaluation needs concrete field matrices")
    n = matrices[0].n
    m = p.nvars
    desc = ring.desc
    entries = {}
    for s in range(1, n + 1):
        point = tuple(a.entry(s, s) for a in matrices)
        val = p.eval_scalar(point)
        if not desc.is_zero(val):
            entries[(s, s)] = val
    deg = p.degree()
    # which matrices have a nonzero entry at each arc
    live = {}
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            live[(j, k)] = [i for i in range(1, m + 1)
                            if (j, k) in matrices[i - 1].entries]
    for s in range(1, n + 1):
        for t in range(s + 1, n + 1):
            total = desc.zero()
            for k in range(1, min(t - s, deg) + 1):
                for interior in combinations(range(s + 1, t), k - 1):
                    path = (s,) + interior + (t,)
                    arcs = list(zip(path, path[1:]))
                    pools = [live[a] for a in arcs]
                    if any(not pool for pool in pools):
                        continue
                    for slots in product(*pools):
                        arc_val = desc.one()
                        for (j1, k1), i in zip(arcs, slots):
                            arc_val = arc_val * matrices[i - 1].entry(j1, k1)
                        q = coeff_poly(p, slots)
                        if q.is_zero():
                            continue
                        assign = {}
                        for l, row in enumerate(path, start=1):
                            for i in range(1, m + 1):
                                assign[diag_var(l, i)] = matrices[i - 1].entry(row, row)
                        total = total + q.eval_full(assign) * arc_val
            if not desc.is_zero(total):
                entries[(s, t)] = total
    return UTMatrix(FieldRing(desc), n, entries)
