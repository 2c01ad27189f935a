import random
from fractions import Fraction

import pytest

from kappainv import ConfigurationError, Field, UnsupportedLiftError, lift_coeff, reduce_coeff
from kappainv.ring import ZZ, integer_nth_root


def exhaustive_roots(field, a, n):
    return [field.element(i) for i in range(field.order)
            if field.pow_(field.element(i), n) == a]


class TestNthRoot:
    def test_gf2_square_root_of_one(self, F2):
        assert F2.nth_root(1, 2) == 1

    def test_gf7_cube_root_of_six(self, F7):
        # oracle: exhaustive search over GF(7)
        assert exhaustive_roots(F7, 6, 3) == [3, 5, 6]
        assert F7.nth_root(6, 3) == 3
        assert F7.pow_(3, 3) == 6

    def test_gf5_two_has_no_square_root(self, F5):
        assert {F5.pow_(c, 2) for c in range(5)} == {0, 1, 4}
        assert F5.nth_root(2, 2) is None

    def test_rational_roots(self, QQ):
        assert QQ.nth_root(Fraction(8, 27), 3) == Fraction(2, 3)
        assert QQ.nth_root(Fraction(-8), 3) == Fraction(-2)
        assert QQ.nth_root(Fraction(4), 2) == Fraction(2)
        assert QQ.nth_root(Fraction(-4), 2) is None
        assert QQ.nth_root(Fraction(2), 2) is None

    def test_root_power_identity_randomized(self, F7, F5, F4):
        rng = random.Random(20240811)
        for _ in range(200):
            field = rng.choice([F7, F5, F4])
            a = field.element(rng.randrange(field.order))
            n = rng.randrange(1, 7)
            root = field.nth_root(a, n)
            if root is not None:
                assert field.pow_(root, n) == a
            assert field.all_nth_roots(a, n) == exhaustive_roots(field, a, n)

    def test_extension_degree_search(self, F5):
        # squares mod 5 miss 2, but GF(25) has all square roots
        assert F5.root_extension_degree(2, 2) == 2


class TestLiftReduce:
    def test_lift_examples(self, F2, F7):
        assert lift_coeff(F2, 1) == 1
        assert lift_coeff(F7, 5) == 5
        assert lift_coeff(F7, 0) == 0

    def test_lift_rejects_extensions(self, F4, QQ):
        with pytest.raises(UnsupportedLiftError):
            lift_coeff(F4, (1, 1))
        with pytest.raises(UnsupportedLiftError):
            lift_coeff(QQ, Fraction(1))

    def test_reduce_examples(self):
        assert reduce_coeff(15, 7) == 1
        assert reduce_coeff(-1, 2) == 1
        assert reduce_coeff(4, 2) == 0

    def test_reduce_after_lift_is_identity(self, F7):
        for a in range(7):
            assert reduce_coeff(lift_coeff(F7, a), 7) == a


class TestFieldAxioms:
    def test_ring_axioms_randomized(self, F7, F4, QQ):
        rng = random.Random(7)
        for _ in range(200):
            field = rng.choice([F7, F4, QQ])
            if field.characteristic == 0:
                sample = lambda: Fraction(rng.randrange(-9, 10), rng.randrange(1, 9))
            else:
                sample = lambda: field.element(rng.randrange(field.order))
            a, b, c = sample(), sample(), sample()
            assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
            assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
            assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
            if not field.is_zero(a):
                assert field.mul(a, field.inv(a)) == field.one

    def test_gf4_has_cube_roots_of_unity(self, F4):
        ones = [c for i in range(4) if F4.pow_(c := F4.element(i), 3) == F4.one]
        assert len(ones) == 3


class TestValidation:
    def test_characteristic_must_be_prime(self):
        with pytest.raises(ConfigurationError):
            Field.finite(6)

    def test_extension_needs_modulus(self):
        with pytest.raises(ConfigurationError):
            Field.finite(2, 2)

    def test_reducible_modulus_rejected(self):
        with pytest.raises(ConfigurationError):
            Field.finite(2, 2, (1, 0, 1))  # t^2 + 1 = (t + 1)^2 over GF(2)

    def test_desk_scale_bound(self):
        with pytest.raises(ConfigurationError):
            Field.finite(2, 17, tuple([1] + [0] * 16 + [1]))


def test_integer_nth_root():
    assert integer_nth_root(27, 3) == 3
    assert integer_nth_root(28, 3) is None
    assert integer_nth_root(10 ** 30, 5) == 10 ** 6
    assert ZZ.div(12, 3) == 4


def test_extension_coefficient_formatting(F4):
    # non-subfield values always carry parentheses: they render inside products
    a = F4.element(2)        # the generator
    assert F4.format_coeff(a) == "(a)"
    assert F4.format_coeff(F4.add(a, F4.one)) == "(a + 1)"
    assert F4.format_coeff(F4.one) == "1"
    assert F4.format_coeff(F4.zero) == "0"
