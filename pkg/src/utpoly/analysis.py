"""Identity testing, the order invariant, coefficient polynomials, and the
five-case image classification for upper triangular evaluations.

Identity testing is symbolic: p is counted as an identity of size n when
every entry of its generic evaluation is the zero polynomial.  Over Q this
decides identity for all fields of characteristic zero; over a prime base
field it decides identity for the infinite extensions of F_p (a small base
field itself may satisfy extra pointwise identities that the symbolic test
deliberately ignores).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .cpoly import CPolynomial, entry_var, render_var
from .errors import (CapReached, InternalInconsistency, OrderMismatch,
                     VariableOutOfRange, ZeroInput)
from .freealg import NcPolynomial
from .triangular import generic_evaluate


def is_identity(p: NcPolynomial, n: int) -> bool:
    """True iff every generic entry of p at size n vanishes identically."""
    return not generic_evaluate(p, n).entries


@lru_cache(maxsize=16384)
def coeff_poly(p: NcPolynomial, slots: tuple) -> CPolynomial:
    """Coefficient polynomial of the arc chain with the given slots.

    For slots (i_1..i_k) this is the polynomial in diagonal variables
    z[1..k+1, *] multiplying x[1,2,i_1]*x[2,3,i_2]*...*x[k,k+1,i_k] in
    entry (1, k+1) of the generic evaluation at size k+1.  All other
    strictly-upper variables are set to zero first; each chain variable
    occurs at most linearly in any path monomial, so the coefficient is
    well defined.
    """
    k = len(slots)
    if k < 1:
        raise OrderMismatch("slot tuple must be nonempty")
    for i in slots:
        if not (1 <= i <= p.nvars):
            raise VariableOutOfRange(f"slot {i} outside 1..{p.nvars}")
    entry = generic_evaluate(p, k + 1).entry(1, k + 1)
    chain = [entry_var(w, w + 1, slots[w - 1]) for w in range(1, k + 1)]
    chain_set = set(chain)
    zero = p.field.zero()
    off = {v: zero for v in entry.variables()
           if v[0] == "x" and v not in chain_set}
    q = entry.eval_partial(off).coefficient_of(chain)
    for v in q.variables():
        if v[0] != "z":
            raise InternalInconsistency(
                f"coefficient polynomial contains {render_var(v)}")
    return q


@dataclass
class OrderReport:
    r: int | None          # None when the cap was hit
    max_n: int
    witness_entry: tuple | None   # (j, k) in the generic matrix of size r+1
    witness_point: dict | None    # VarKey -> value, makes the entry nonzero
    witness_value: object = None

    @property
    def capped(self) -> bool:
        return self.r is None

    def to_json(self, desc) -> dict:
        out = {"r": "cap" if self.capped else self.r, "max_n": self.max_n}
        if self.witness_entry is not None:
            point = None
            if self.witness_point is not None:
                point = {render_var(k): desc.render_value(v)
                         for k, v in sorted(self.witness_point.items())}
            out["witness"] = {
                "n": self.r + 1,
                "entry": list(self.witness_entry),
                "point": point,
            }
        else:
            out["witness"] = None
        return out


def order(p: NcPolynomial, max_n: int | None = None, rng=None,
          sample_height: int = 256, sample_budget: int = 200) -> OrderReport:
    """Least r with p an identity of size r but not of size r+1.

    Probes sizes 1, 2, ... and stops at the first non-identity; identities
    are nested across sizes, so the first failure pins r exactly.  If every
    size through max_n + 1 is an identity the report carries r = None,
    meaning "at least max_n".  The witness is a nonzero generic entry at
    size r+1 plus, when sampling finds one, a concrete point where it is
    nonzero (over tiny prime fields every base-field point may vanish, in
    which case the point is left out and the entry polynomial stands alone).
    """
    if p.is_zero():
        raise ZeroInput("the zero polynomial has no order")
    if max_n is None:
        max_n = p.degree() + 1
    if max_n < 1:
        raise ZeroInput("max_n must be at least 1")
    if rng is None:
        rng = random.Random(0)
    for n in range(1, max_n + 2):
        generic = generic_evaluate(p, n)
        if not generic.entries:
            continue
        pos = min(generic.entries, key=lambda jk: (jk[1] - jk[0], jk[0]))
        poly = generic.entries[pos]
        point = None
        value = None
        for _ in range(sample_budget):
            cand = {v: p.field.sample(rng, sample_height)
                    for v in sorted(poly.variables())}
            val = poly.eval_full(cand)
            if not p.field.is_zero(val):
                point, value = cand, val
                break
        return OrderReport(n - 1, max_n, pos, point, value)
    return OrderReport(None, max_n, None, None)


def exact_order(p: NcPolynomial, max_n: int | None = None) -> int:
    """order() when the caller needs the plain integer; CapReached otherwise."""
    rep = order(p, max_n)
    if rep.capped:
        raise CapReached(f"order not resolved up to {rep.max_n}", cap=rep.max_n)
    return rep.r


def leading_tuples(p: NcPolynomial, r: int) -> list[tuple]:
    """All r-tuples of slots with nonzero coefficient polynomial, in
    lexicographic order.  Nonempty whenever ord(p) = r >= 1; an empty
    result signals an order-computation bug, not bad input."""
    if r < 1:
        raise OrderMismatch("leading tuples need order at least 1")
    out = [slots for slots in product(range(1, p.nvars + 1), repeat=r)
           if not coeff_poly(p, slots).is_zero()]
    if not out:
        raise InternalInconsistency(
            f"no nonzero coefficient polynomial of length {r}")
    return out


@dataclass(frozen=True)
class BandIndexSet:
    """The block of positions between rows s and t together with the
    off-diagonal positions whose jump is small enough to matter at order
    r: pairs (j,k) with j < k and (t-s) - (k-j) >= r-1."""
    s: int
    t: int
    r: int
    block_pairs: frozenset
    arc_support: frozenset


def band_sets(s: int, t: int, r: int) -> BandIndexSet:
    if not (1 <= s < t) or r < 1:
        raise ValueError(f"band_sets needs 1 <= s < t and r >= 1, got ({s},{t},{r})")
    block = frozenset((j, k) for j in range(s, t + 1) for k in range(j, t + 1))
    support = frozenset((j, k) for (j, k) in block
                        if j != k and (t - s) - (k - j) >= r - 1)
    return BandIndexSet(s, t, r, block, support)


@dataclass
class Classification:
    case: str            # dense_full | equals_band | dense_in_band | zero
    r: int | None        # None when only "r >= n" is known
    n: int
    band: int
    affine_dim: int

    def to_json(self) -> dict:
        return {
            "r": "cap" if self.r is None else self.r,
            "n": self.n,
            "case": self.case,
            "band": self.band,
            "affine_dim": self.affine_dim,
        }


def _dim_of_band(n: int, band: int) -> int:
    return (n - 1 - band) * (n - band) // 2


def classify(p: NcPolynomial, n: int, max_n: int | None = None) -> Classification:
    """Image shape of p on size-n upper triangular matrices by (r, n).

    r=0: dense in the whole algebra.  r=1: the image IS the strictly upper
    band.  1 < r < n-1: dense in band r-1.  r = n-1: the image IS the top
    corner band.  r >= n: zero.  The case checks run in that order, which
    settles the overlaps (r=1, n=2 hits the r=1 case).
    """
    if p.is_zero():
        raise ZeroInput("cannot classify the zero polynomial")
    if n < 1:
        raise ZeroInput("n must be at least 1")
    if max_n is None:
        max_n = n
    r = None
    for size in range(1, max_n + 2):
        if not is_identity(p, size):
            r = size - 1
            break
    if r is None:
        # order unresolved; the zero case is still decidable from size n alone
        if n <= max_n + 1 or is_identity(p, n):
            return Classification("zero", None, n, n - 1, 0)
        raise CapReached(
            f"order not resolved up to {max_n} but below {n}", cap=max_n)
    if r == 0:
        return Classification("dense_full", 0, n, -1, _dim_of_band(n, -1))
    if r == 1:
        return Classification("equals_band", 1, n, 0, _dim_of_band(n, 0))
    if 1 < r < n - 1:
        return Classification("dense_in_band", r, n, r - 1, _dim_of_band(n, r - 1))
    if r == n - 1:
        return Classification("equals_band", r, n, n - 2, _dim_of_band(n, n - 2))
    return Classification("zero", r, n, n - 1, 0)
