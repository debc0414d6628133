import random

import pytest

from fk_picard.errors import FieldMismatchError, InputError
from fk_picard.field import (Field, PrimeModulus, build_extension, is_prime,
                             is_square, legendre_symbol, sqrt)

F7 = Field.prime(7)
F13 = Field.prime(13)


def test_prime_field_products():
    assert (F7.element(3) * F7.element(5)).lift() == 1
    assert (F7.element(0) - F7.element(1)).lift() == 6


def test_extension_defining_relation():
    F49 = Field.extension(7, 2)
    assert F49.ext_modulus == (1, 0, 1)  # x^2 + 1, -1 a non-residue mod 7
    x = F49.element((0, 1))
    assert x * x == F49.element(-1)


def test_modulus_validation():
    for bad in (1, 4, 9, 2, 3):
        with pytest.raises(InputError):
            PrimeModulus(bad)
    assert PrimeModulus(5).p == 5
    assert is_prime(997) and not is_prime(999)


def test_field_mismatch_raises():
    with pytest.raises(FieldMismatchError):
        F7.element(1) + F13.element(1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        F7.element(1) / F7.element(0)
    with pytest.raises(ZeroDivisionError):
        F7.element(0).inverse()


def test_inverse_axioms_fuzz():
    rng = random.Random(11)
    for field in (F13, Field.extension(5, 2), Field.extension(7, 3)):
        for _ in range(50):
            a = field.element(tuple(rng.randrange(field.p) for _ in range(field.k)))
            b = field.element(tuple(rng.randrange(field.p) for _ in range(field.k)))
            if a.is_zero() or b.is_zero():
                continue
            assert a * a.inverse() == field.one
            assert (a * b).inverse() == b.inverse() * a.inverse()


def test_pow_matches_repeated_multiplication():
    a = F13.element(6)
    acc = F13.one
    for e in range(10):
        assert a ** e == acc
        acc = acc * a
    assert a ** -1 == a.inverse()


def test_is_square_examples():
    assert is_square(F7.element(2))        # 3^2 = 2 mod 7
    assert not is_square(F7.element(-1))   # 7 = 3 mod 4
    assert is_square(F13.element(-1))      # 13 = 1 mod 4
    assert is_square(F7.element(0))        # zero by convention


def test_euler_criterion_is_exact():
    for field in (F13, Field.extension(5, 2)):
        half = (field.q - 1) // 2
        for a in field.elements():
            if a.is_zero():
                continue
            assert is_square(a) == (a ** half == field.one)


def test_sqrt_examples():
    assert sqrt(F7.element(4)).lift() == 2
    assert sqrt(F7.element(3)) is None
    assert sqrt(F7.element(0)).is_zero()
    # brute-force oracle for -1 mod 13: the smaller of the two roots
    roots = [b for b in range(13) if (b * b) % 13 == 12]
    assert sqrt(F13.element(-1)).lift() == min(roots) == 5


def test_sqrt_consistency_with_exhaustive_search():
    for field in (F13, Field.extension(5, 2), Field.extension(7, 2)):
        elements = list(field.elements())
        squares = {}
        for b in elements:
            squares.setdefault((b * b).coeffs, []).append(b)
        for a in elements:
            r = sqrt(a)
            if a.coeffs in squares:
                assert is_square(a)
                assert r is not None and r * r == a
                # canonical pick: lexicographically smaller coefficient tuple
                assert r.coeffs == min(b.coeffs for b in squares[a.coeffs])
            else:
                assert not is_square(a)
                assert r is None


def test_legendre_symbol_values():
    assert legendre_symbol(F7.element(2)) == 1
    assert legendre_symbol(F7.element(3)) == -1
    assert legendre_symbol(F7.element(0)) == 0


def _has_root(coeffs, p):
    return any(sum(c * x ** i for i, c in enumerate(coeffs)) % p == 0
               for x in range(p))


def test_build_extension_smallest_irreducible():
    # oracle: scan monic quadratics in lex order of (c1, c0), checking
    # irreducibility by absence of roots
    for p in (5, 7, 11):
        expected = None
        for c1 in range(p):
            for c0 in range(p):
                if not _has_root((c0, c1, 1), p):
                    expected = (c0, c1, 1)
                    break
            if expected:
                break
        assert build_extension(p, 2) == expected
    assert build_extension(7, 2) == (1, 0, 1)
    assert build_extension(5, 2) == (2, 0, 1)
    assert build_extension(13, 1) == (0, 1)


def test_build_extension_no_small_factor():
    # degree 4: the output must have no root and no irreducible
    # quadratic factor (checked by trial division)
    p = 5
    quartic = build_extension(p, 4)
    assert not _has_root(quartic, p)

    def polydiv_exact(f, g):
        f = list(f)
        while len(f) >= len(g):
            lead = f[-1] * pow(g[-1], -1, p) % p
            shift = len(f) - len(g)
            for i, c in enumerate(g):
                f[i + shift] = (f[i + shift] - lead * c) % p
            while f and f[-1] == 0:
                f.pop()
            if len(f) < len(g):
                break
        return all(c % p == 0 for c in f)

    for c1 in range(p):
        for c0 in range(p):
            if not _has_root((c0, c1, 1), p):
                assert not polydiv_exact(quartic, (c0, c1, 1))


def test_build_extension_degree_limits():
    with pytest.raises(InputError):
        build_extension(7, 0)
    with pytest.raises(InputError):
        build_extension(7, 7)


def test_frobenius_fixes_exactly_prime_subfield():
    for p, k in ((5, 2), (7, 2), (5, 3)):
        field = Field.extension(p, k)
        fixed = [a for a in field.elements() if a ** p == a]
        assert len(fixed) == p
        assert all(a.in_prime_subfield() for a in fixed)


def test_elements_enumeration_order_and_size():
    F25 = Field.extension(5, 2)
    els = list(F25.elements())
    assert len(els) == 25
    assert els[0].coeffs == (0, 0)
    assert [e.coeffs for e in els] == sorted(e.coeffs for e in els)
