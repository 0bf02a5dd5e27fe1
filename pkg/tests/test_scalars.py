"""Exact scalar arithmetic: cyclotomic levels, pi grading, text round trips."""

import random
from fractions import Fraction

import pytest

from contact_index.scalars import (CyclotomicNumber, ExactScalar, ScalarError,
                                   approx_display, cyclotomic_polynomial)


ONE = ExactScalar.one()
I = ExactScalar.i()
TWO_PI = ExactScalar.pi_power(1, 2)


class TestCyclotomicLevels:
    def test_level_must_be_multiple_of_four(self):
        with pytest.raises(ScalarError):
            CyclotomicNumber(6, {0: 1})

    def test_rational_lives_at_level_four(self):
        assert CyclotomicNumber.from_rational(Fraction(3, 7)).level == 4

    def test_promote_identity_embeds(self):
        one = CyclotomicNumber.from_rational(1)
        up = one.promote(12)
        assert up.level == 12
        assert up == one

    def test_promote_i_to_level_eight(self):
        i = CyclotomicNumber.zeta(4, 1)
        up = i.promote(8)
        assert up.coeffs == CyclotomicNumber.zeta(8, 2).coeffs

    def test_promote_zeta3_to_level_24_satisfies_minimal_polynomial(self):
        z = CyclotomicNumber.root_of_unity(1, 3).promote(24)
        value = z * z + z + CyclotomicNumber.from_rational(1)
        assert value.is_zero()

    def test_promote_rejects_non_multiple(self):
        z = CyclotomicNumber.root_of_unity(1, 3)  # level 12
        with pytest.raises(ScalarError):
            z.promote(16)

    def test_demote_round_trip(self):
        z = CyclotomicNumber.zeta(4, 1).promote(24)
        assert z.demote().level == 4

    def test_cross_level_equality(self):
        a = CyclotomicNumber.root_of_unity(1, 4)
        b = CyclotomicNumber.zeta(24, 6)  # the same root at level 24
        assert a == b

    def test_cyclotomic_polynomial_degree_is_totient(self):
        assert len(cyclotomic_polynomial(12)) == 5  # x^4 - x^2 + 1
        assert list(cyclotomic_polynomial(4)) == [1, 0, 1]


class TestArithmeticExamples:
    def test_two_pi_squared(self):
        assert TWO_PI * TWO_PI == ExactScalar.pi_power(2, 4)

    def test_gaussian_norm(self):
        assert (ONE - I) * (ONE + I) == ExactScalar.from_rational(2)

    def test_division_by_two_pi_i(self):
        q = (TWO_PI * TWO_PI) / (TWO_PI * I)
        assert q == ExactScalar.pi_power(1, -2) * I
        assert q * (TWO_PI * I) == TWO_PI * TWO_PI

    def test_division_by_multi_term_scalar_is_rejected(self):
        bad = ONE + TWO_PI
        with pytest.raises(ScalarError, match="pi-grades"):
            ONE / bad

    def test_division_by_zero_is_rejected(self):
        with pytest.raises(ScalarError):
            ONE / ExactScalar.zero()

    def test_self_subtraction_is_structural_zero(self):
        x = ExactScalar.root_of_unity(2, 5) * TWO_PI + I
        assert (x - x).is_zero()


def _random_scalar(rng):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(-2, 2)
        q = rng.choice([3, 4, 12])
        cyc = CyclotomicNumber.root_of_unity(rng.randint(0, q - 1), q) * \
            CyclotomicNumber.from_rational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        terms[k] = terms[k] + cyc if k in terms else cyc
    return ExactScalar(terms)


class TestRingAxioms:
    def test_axioms_on_randomized_inputs(self):
        # 2000 triples x 5 axiom checks = 10^4 exact property cases
        rng = random.Random(20260809)
        for _ in range(2000):
            a, b, c = (_random_scalar(rng) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_conjugation_is_an_automorphism(self):
        rng = random.Random(7)
        for _ in range(300):
            a, b = _random_scalar(rng), _random_scalar(rng)
            assert (a * b).conjugate() == a.conjugate() * b.conjugate()
            assert (a + b).conjugate() == a.conjugate() + b.conjugate()

    def test_inversion_round_trips(self):
        rng = random.Random(11)
        count = 0
        while count < 200:
            a = _random_scalar(rng)
            if len(a.terms) != 1:
                continue
            count += 1
            assert a * a.inverse() == ONE


class TestTextForm:
    def test_round_trip_examples(self):
        cases = [
            ExactScalar.zero(),
            ONE,
            I,
            TWO_PI,
            ExactScalar.pi_power(-1, Fraction(1, 2)),
            ExactScalar.root_of_unity(2, 3) * TWO_PI + ExactScalar.from_rational(Fraction(-7, 3)),
        ]
        for x in cases:
            assert ExactScalar.from_text(x.to_text()) == x

    def test_round_trip_randomized(self):
        rng = random.Random(23)
        for _ in range(300):
            x = _random_scalar(rng)
            assert ExactScalar.from_text(x.to_text()) == x

    def test_canonical_text_is_identical_for_equal_values(self):
        a = ExactScalar({0: CyclotomicNumber.zeta(4, 1).promote(24)})
        assert a.to_text() == I.to_text()

    def test_rejects_garbage(self):
        with pytest.raises(ScalarError):
            ExactScalar.from_text("pi + 1")


class TestApproxDisplay:
    def test_four_pi_squared(self):
        assert approx_display(TWO_PI * TWO_PI, 4).startswith("39.478")

    def test_imaginary_unit(self):
        assert approx_display(I, 3) == "0+1i"

    def test_third_root_of_unity(self):
        s = approx_display(ExactScalar.root_of_unity(1, 3), 3)
        assert s == "-0.5+0.866i"

    def test_display_never_feeds_back(self):
        # the display is a string; exact arithmetic objects never accept floats
        with pytest.raises(TypeError):
            ONE + 0.5


class TestPredicates:
    def test_integrality(self):
        assert (TWO_PI * ExactScalar.pi_power(-1, Fraction(1, 2))).is_integer()
        assert not ExactScalar.from_rational(Fraction(1, 2)).is_integer()
        assert not I.is_rational()

    def test_rational_value(self):
        assert (TWO_PI / TWO_PI).rational_value() == 1
