"""Field descriptors, prime-field arithmetic, and univariate solving."""

import math
import random
from fractions import Fraction

import pytest

from utpoly.errors import NoRootInField, ParseError
from utpoly.fields import FieldDescriptor, Fp, is_prime, solve_univariate, split_sign

Q = FieldDescriptor.parse("Q")
F7 = FieldDescriptor.parse("Fp:7")
C = FieldDescriptor.parse("C")


def test_is_prime_small_table():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(-2, 50):
        assert is_prime(n) == (n in primes)


def test_is_prime_large():
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)
    assert not is_prime(341)  # Fermat pseudoprime base 2
    assert not is_prime(561)  # Carmichael


def test_descriptor_parse_render_roundtrip():
    for text in ("Q", "Fp:7", "Fp:101", "C"):
        assert FieldDescriptor.parse(text).render() == text
    tol = FieldDescriptor.parse("C:1e-6")
    assert tol.kind == "complex" and tol.eps == 1e-6


def test_descriptor_parse_rejects_bad_input():
    for bad in ("R", "Fp:4", "Fp:1", "Fp:", "Fp:abc", "Zp:7", ""):
        with pytest.raises(ParseError):
            FieldDescriptor.parse(bad)


def test_descriptor_equality_ignores_tolerance():
    assert FieldDescriptor.parse("C").same_field(FieldDescriptor.parse("C:1e-3"))
    assert not Q.same_field(F7)
    assert not F7.same_field(FieldDescriptor.parse("Fp:11"))


def test_fp_arithmetic():
    a, b = Fp(3, 7), Fp(5, 7)
    assert a + b == Fp(1, 7)
    assert a - b == Fp(5, 7)
    assert a * b == Fp(1, 7)
    assert a / b == Fp(2, 7)  # 3 * 5^{-1} = 3 * 3 = 9 = 2
    assert -a == Fp(4, 7)
    assert a ** 6 == Fp(1, 7)  # Fermat
    assert a ** -1 == Fp(5, 7)  # 3*5 = 15 = 1
    assert a + 11 == Fp(0, 7)  # int lifting
    assert 2 * a == Fp(6, 7)
    assert 1 / b == Fp(3, 7)
    assert bool(Fp(0, 7)) is False and bool(a) is True


def test_fp_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        Fp(1, 7) + Fp(1, 11)


def test_fp_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Fp(1, 7) / Fp(0, 7)
    with pytest.raises(ZeroDivisionError):
        Fp(0, 7) ** -1


def test_fp_hash_consistent_with_eq():
    assert hash(Fp(3, 7)) == hash(Fp(10, 7))
    assert Fp(3, 7) == Fp(10, 7)
    # ints are not equal to Fp (hash consistency)
    assert (Fp(3, 7) == 3) is False or Fp(3, 7).__eq__(3) is NotImplemented


def test_literals_roundtrip_rational():
    for text, want in (("5", Fraction(5)), ("-3", Fraction(-3)),
                       ("2.5", Fraction(5, 2)), ("1e3", Fraction(1000))):
        got = Q.parse_literal(text)
        assert got == want
        assert Q.parse_literal(Q.render_value(got)) == got


def test_literals_roundtrip_prime():
    v = F7.parse_literal("12")
    assert v == Fp(5, 7)
    assert F7.render_value(v) == "5"


def test_literals_roundtrip_complex():
    for text in ("3", "-2.5", "1e-3", "2j", "1+2j", "-1.5-0.5j"):
        v = C.parse_literal(text)
        assert C.eq(C.parse_literal(C.render_value(v)), v)


def test_rational_render_is_exact():
    v = Fraction(-22, 7)
    assert Q.render_value(v) == "-22/7"
    assert Q.parse_literal("-22/7") == v


def test_from_int_from_fraction():
    assert F7.from_int(10) == Fp(3, 7)
    assert F7.from_fraction(Fraction(1, 2)) == Fp(4, 7)  # 2^{-1} = 4 mod 7
    assert Q.from_fraction(Fraction(3, 4)) == Fraction(3, 4)
    assert C.from_int(3) == 3.0 + 0j


def test_is_zero_and_eq_tolerance():
    assert C.is_zero(1e-12)
    assert not C.is_zero(1e-3)
    assert C.eq(1.0, 1.0 + 1e-12)
    assert Q.is_zero(Fraction(0)) and not Q.is_zero(Fraction(1, 10 ** 9))


def test_sample_support_rational():
    rng = random.Random(0)
    seen = {Q.sample(rng) for _ in range(4000)}
    assert len(seen) > 3000  # far beyond what height 100 could give
    rng = random.Random(1)
    for _ in range(200):
        assert not Q.is_zero(Q.sample_nonzero(rng))


def test_sample_prime_field_covers():
    rng = random.Random(2)
    seen = {F7.sample(rng).v for _ in range(200)}
    assert seen == set(range(7))
    assert all(F7.sample_nonzero(random.Random(i)).v != 0 for i in range(50))


def test_split_sign():
    assert split_sign(Q, Fraction(-3, 2)) == (-1, "3/2")
    assert split_sign(Q, Fraction(5)) == (1, "5")
    assert split_sign(F7, Fp(6, 7)) == (1, "6")


def test_solve_univariate_rational_quadratic():
    rng = random.Random(3)
    # 2u^2 = 8 -> u = +-2; both roots must be reachable across seeds
    roots = {solve_univariate(Q, [Fraction(0), Fraction(0), Fraction(2)],
                              Fraction(8), random.Random(i)) for i in range(20)}
    assert roots == {Fraction(2), Fraction(-2)}
    with pytest.raises(NoRootInField):
        solve_univariate(Q, [Fraction(0), Fraction(0), Fraction(1)],
                         Fraction(2), rng)  # sqrt(2) irrational


def test_solve_univariate_rational_linear_and_degenerate():
    rng = random.Random(4)
    assert solve_univariate(Q, [Fraction(1), Fraction(3)], Fraction(7), rng) == Fraction(2)
    # identically-zero equation: any field element works
    v = solve_univariate(Q, [Fraction(0)], Fraction(0), rng)
    assert isinstance(v, Fraction)
    with pytest.raises(NoRootInField):
        solve_univariate(Q, [Fraction(1)], Fraction(2), rng)  # 1 = 2


def test_solve_univariate_prime_exhaustive():
    F5 = FieldDescriptor.parse("Fp:5")
    rng = random.Random(5)
    # u^2 = 4 over F_5 -> u in {2, 3}
    roots = {solve_univariate(F5, [Fp(0, 5), Fp(0, 5), Fp(1, 5)],
                              Fp(4, 5), random.Random(i)).v for i in range(20)}
    assert roots == {2, 3}
    with pytest.raises(NoRootInField):
        solve_univariate(F5, [Fp(0, 5), Fp(0, 5), Fp(1, 5)], Fp(2, 5), rng)


def test_solve_univariate_complex_cube_root():
    rng = random.Random(6)
    u = solve_univariate(C, [0j, 0j, 0j, 1 + 0j], -8 + 0j, rng)
    assert abs(u ** 3 + 8) < 1e-8


def test_solve_univariate_complex_always_solvable():
    rng = random.Random(7)
    for k in range(2, 6):
        coeffs = [0j] * k + [1 + 0j]
        tgt = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        u = solve_univariate(C, coeffs, tgt, rng)
        assert abs(u ** k - tgt) < 1e-7 * max(1.0, abs(tgt))
