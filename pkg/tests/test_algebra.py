import cmath
import math
import random
from unittest import TestCase

import numpy as np

from expperiods.algebra import (
    INFINITY,
    LaurentWindow,
    PolyC,
    PrincipalPart,
    RationalC,
    exp_principal_series,
    laurent_expansion,
    random_monic,
    random_poly,
    residue_exp_product,
    residue_meromorphic,
    residue_pairing,
    root_multiplicities,
)
from expperiods.errors import InputError, SeriesDivergence


class PolyCTest(TestCase):

    def test_trailing_zeros_are_trimmed(self) -> None:
        self.assertEqual(PolyC((1, 2, 0, 0)), PolyC((1, 2)))
        self.assertEqual(PolyC((1, 2, 0)).degree, 1)

    def test_zero_polynomial(self) -> None:
        zero = PolyC((0, 0))
        self.assertTrue(zero.is_zero())
        self.assertIsNone(zero.degree)
        self.assertEqual(zero.derivative(), PolyC.zero())
        self.assertEqual(zero * PolyC((1, 1)), PolyC.zero())

    def test_arithmetic(self) -> None:
        p = PolyC((1, 1))
        self.assertEqual(p * p, PolyC((1, 2, 1)))
        self.assertEqual(p - p, PolyC.zero())
        self.assertEqual(2 * p + 1, PolyC((3, 2)))
        self.assertEqual(PolyC.monomial(3, 2).derivative(), PolyC((0, 0, 6)))
        self.assertEqual(PolyC.constant(4).derivative(), PolyC.zero())
        self.assertEqual(PolyC((1, 1)) * PolyC((-1, 1)), PolyC((-1, 0, 1)))

    def test_compose_affine(self) -> None:
        square = PolyC.monomial(2)
        composed = square.compose_affine(2, 1)
        np.testing.assert_allclose(composed.as_array(), [1, 4, 4])

    def test_divmod(self) -> None:
        quotient, remainder = PolyC((-1, 0, 1)).divmod(PolyC((-1, 1)))
        np.testing.assert_allclose(quotient.as_array(), [1, 1], atol=1e-14)
        self.assertLess(remainder.max_coefficient(), 1e-14)

    def test_multiplicity(self) -> None:
        p = PolyC.from_roots([2, 2, 2, -1])
        self.assertEqual(p.multiplicity_at(2), 3)
        self.assertEqual(p.multiplicity_at(-1), 1)
        self.assertEqual(p.multiplicity_at(0), 0)

    def test_root_multiplicities(self) -> None:
        p = PolyC.from_roots([1] * 5 + [-2, -2, 3j])
        found = root_multiplicities(p)
        self.assertEqual(sum(n for _, n in found), 8)
        for target, count in ((1, 5), (-2, 2), (3j, 1)):
            matches = [(r, n) for r, n in found if abs(r - target) < 1e-8]
            self.assertEqual(len(matches), 1, found)
            self.assertEqual(matches[0][1], count)

    def test_close_simple_roots_stay_apart(self) -> None:
        found = root_multiplicities(PolyC.from_roots([1, 1.05, 1.06j]))
        self.assertEqual(sorted(n for _, n in found), [1, 1, 1])

    def test_high_multiplicities(self) -> None:
        for m in range(1, 9):
            found = root_multiplicities(PolyC.from_roots([1] * m))
            self.assertEqual(len(found), 1, f"m = {m}: {found}")
            self.assertEqual(found[0][1], m)
            self.assertLess(abs(found[0][0] - 1), 1e-10)

    def test_random_monic(self) -> None:
        p = random_monic(5, random.Random(3))
        self.assertEqual(p.degree, 5)
        self.assertEqual(p.leading, 1)
        self.assertTrue(all(abs(c) <= 1 for c in p.coeffs))
        self.assertEqual(p, random_monic(5, random.Random(3)))

    def test_random_poly(self) -> None:
        p = random_poly(4, random.Random(5))
        self.assertEqual(p.degree, 4)
        self.assertGreaterEqual(abs(p.leading), 0.5)


class RationalCTest(TestCase):

    def test_common_roots_cancel(self) -> None:
        w = RationalC(PolyC((-1, 0, 1)), PolyC((-1, 1)))
        self.assertEqual(w.den, PolyC((1,)))
        np.testing.assert_allclose(w.num.as_array(), [1, 1], atol=1e-12)

    def test_denominator_is_monic(self) -> None:
        w = RationalC(PolyC((1,)), PolyC((0, 2)))
        self.assertEqual(w.den, PolyC((0, 1)))
        self.assertEqual(w.num, PolyC((0.5,)))

    def test_triple_root_cancels_to_its_multiplicity(self) -> None:
        w = RationalC(PolyC.from_roots([1, 1, 1, 2]), PolyC.from_roots([1, 1, 3]))
        self.assertEqual(w.num.degree, 2)
        self.assertEqual(w.den.degree, 1)
        self.assertEqual(w.order_at(1 + 0j), 1)
        self.assertEqual(w.order_at(3 + 0j), -1)
        self.assertLess(abs(w(0.5) - (-0.5) * (-1.5) / (-2.5)), 1e-10)

    def test_high_order_cancellation(self) -> None:
        for m in range(3, 8):
            w = RationalC(PolyC.from_roots([1] * m + [-1]), PolyC.from_roots([1] * (m - 1)))
            self.assertEqual(w.den, PolyC((1,)), f"m = {m}")
            np.testing.assert_allclose(w.num.as_array(), [-1, 0, 1], atol=1e-8)

    def test_zero_denominator_rejected(self) -> None:
        with self.assertRaises(AssertionError):
            RationalC(PolyC((1,)), PolyC.zero())

    def test_order(self) -> None:
        w = RationalC(PolyC((1, 0, 1)), PolyC((0, 1)))
        self.assertEqual(w.order_at(0j), -1)
        self.assertEqual(w.order_at(1j), 1)
        self.assertEqual(w.order_at(INFINITY), -1)


class LaurentTest(TestCase):

    def test_geometric_series(self) -> None:
        window = laurent_expansion(RationalC(PolyC((1,)), PolyC((1, -1))), 0j, hi=10)
        self.assertEqual(window.lo, 0)
        self.assertTrue(window.closed_below)
        self.assertFalse(window.closed_above)
        np.testing.assert_allclose(window.as_array(), np.ones(11), atol=1e-14)
        with self.assertRaises(InputError):
            window.coefficient(11)
        self.assertEqual(window.coefficient(-3), 0)

    def test_pole_order(self) -> None:
        window = laurent_expansion(RationalC(PolyC((1, 0, 2)), PolyC((0, 1))), 0j, hi=3)
        self.assertEqual(window.lo, -1)
        self.assertAlmostEqual(window.coefficient(-1), 1)
        self.assertAlmostEqual(window.coefficient(1), 2)
        self.assertTrue(window.closed_above)

    def test_shifted_centre(self) -> None:
        # 1 / (z - 2)^2 at 2
        window = laurent_expansion(RationalC(PolyC((1,)), PolyC((4, -4, 1))), 2 + 0j, hi=0)
        self.assertEqual(window.lo, -2)
        self.assertAlmostEqual(window.coefficient(-2), 1, places=10)
        self.assertAlmostEqual(abs(window.coefficient(-1)), 0, places=8)

    def test_product_of_closed_windows(self) -> None:
        first = LaurentWindow(-1, 0, (1, 1), closed_below=True, closed_above=True)
        second = LaurentWindow(0, 1, (1, 1), closed_below=True, closed_above=True)
        product = first * second
        self.assertEqual((product.lo, product.hi), (-1, 1))
        np.testing.assert_allclose(product.as_array(), [1, 2, 1])

    def test_product_stops_at_undetermined_powers(self) -> None:
        series = LaurentWindow(0, 3, (1, 1, 1, 1), closed_below=True)
        polynomial = LaurentWindow(0, 1, (1, -1), closed_below=True, closed_above=True)
        product = series * polynomial
        self.assertEqual((product.lo, product.hi), (0, 3))
        np.testing.assert_allclose(product.as_array(), [1, 0, 0, 0])
        self.assertFalse(product.closed_above)

    def test_sum(self) -> None:
        first = LaurentWindow(-1, 0, (1, 1), closed_below=True, closed_above=True)
        second = LaurentWindow(0, 2, (1, 1, 1), closed_below=True)
        total = first + second
        self.assertEqual((total.lo, total.hi), (-1, 2))
        np.testing.assert_allclose(total.as_array(), [1, 2, 1, 1])


class ExpSeriesTest(TestCase):

    def test_simple_pole(self) -> None:
        window = exp_principal_series(PrincipalPart((2,)), lo=-2)
        self.assertEqual(window.coefficient(-2), 2)
        self.assertEqual(window.coefficient(-1), 2)
        self.assertEqual(window.coefficient(0), 1)
        self.assertEqual(window.coefficient(1), 0)

    def test_double_pole(self) -> None:
        window = exp_principal_series(PrincipalPart((0, 1)), lo=-2)
        self.assertEqual(window.coefficient(-2), 1)
        self.assertEqual(window.coefficient(-1), 0)
        self.assertEqual(window.coefficient(0), 1)

    def test_factorials(self) -> None:
        window = exp_principal_series(PrincipalPart((1,)), lo=-10)
        for n in range(11):
            self.assertAlmostEqual(window.coefficient(-n), 1 / math.factorial(n))

    def test_positive_lo_rejected(self) -> None:
        with self.assertRaises(InputError):
            exp_principal_series(PrincipalPart((1,)), lo=1)

    def test_sum_of_exponents_multiplies(self) -> None:
        rng = random.Random(21)
        for _ in range(20):
            first = PrincipalPart(tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 4))))
            second = PrincipalPart(tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 4))))
            lo = -rng.randint(0, 12)
            a, b = exp_principal_series(first, lo), exp_principal_series(second, lo)
            joint = exp_principal_series(first + second, lo)
            for power in range(lo, 1):
                expected = sum(a.coefficient(k) * b.coefficient(power - k) for k in range(power, 1))
                self.assertLess(abs(joint.coefficient(power) - expected), 1e-10 * max(1.0, abs(expected)))


class ResidueTest(TestCase):

    def test_finite_residue(self) -> None:
        w = RationalC(PolyC((1, 0, 2)), PolyC((0, 1)))
        self.assertAlmostEqual(residue_meromorphic(w, 0j), 1)
        self.assertEqual(residue_meromorphic(w, 5 + 0j), 0)

    def test_residue_at_infinity(self) -> None:
        self.assertAlmostEqual(residue_meromorphic(RationalC(PolyC((1,)), PolyC((0, 1))), INFINITY), -1)
        self.assertEqual(residue_meromorphic(RationalC(PolyC((1,)), PolyC((0, 0, 1))), INFINITY), 0)

    def test_residues_sum_to_zero(self) -> None:
        rng = random.Random(11)
        for _ in range(20):
            poles = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(rng.randint(1, 4))]
            w = RationalC(random_poly(rng.randint(0, 5), rng), PolyC.from_roots(poles))
            total = sum(residue_meromorphic(w, p) for p in poles) + residue_meromorphic(w, INFINITY)
            self.assertLess(abs(total), 1e-8)

    def assert_log_residues(self, zeros: dict, poles: dict) -> None:
        f = RationalC(PolyC.from_roots([p for p, n in zeros.items() for _ in range(n)]),
                      PolyC.from_roots([p for p, n in poles.items() for _ in range(n)]))
        dlog = f.log_derivative()
        for point, n in zeros.items():
            self.assertLess(abs(residue_meromorphic(dlog, complex(point)) - n), 1e-6, f"zero {point} of {f}")
        for point, n in poles.items():
            self.assertLess(abs(residue_meromorphic(dlog, complex(point)) + n), 1e-6, f"pole {point} of {f}")
        self.assertLess(abs(residue_meromorphic(dlog, INFINITY) - f.order_at(INFINITY)), 1e-6)

    def test_log_derivative_residues_are_orders(self) -> None:
        self.assert_log_residues({0: 3, 1: 4}, {2: 2})
        self.assert_log_residues({1: 3}, {})
        self.assert_log_residues({}, {-1: 5})

    def test_log_derivative_residues_random(self) -> None:
        rng = random.Random(8)
        lattice = [complex(x, y) for x in range(-1, 2) for y in range(-1, 2)]
        for _ in range(20):
            points = rng.sample(lattice, rng.randint(1, 3))
            orders = {p: rng.randint(1, 3) for p in points}
            zeros = {p: n for p, n in orders.items() if rng.random() < 0.5}
            poles = {p: n for p, n in orders.items() if p not in zeros}
            self.assert_log_residues(zeros, poles)

    def test_residue_pairing(self) -> None:
        one = RationalC.of(1)
        self.assertAlmostEqual(residue_pairing(one, PrincipalPart((1,)), 0j), 1)
        self.assertAlmostEqual(residue_pairing(RationalC(PolyC((1,)), PolyC((0, 0, 1))), PrincipalPart((1,)), INFINITY), -1)
        # z^-2 against c_2 w^-2 + c_1 w^-1 at 0 has no w^-1 term
        self.assertEqual(residue_pairing(RationalC(PolyC((1,)), PolyC((0, 0, 1))), PrincipalPart((3, 1)), 0j), 0)


class ResidueExpProductTest(TestCase):

    def test_e_minus_one(self) -> None:
        alpha = laurent_expansion(RationalC(PolyC((1,)), PolyC((1, -1))), 0j, hi=30)
        value, tail = residue_exp_product(alpha, PrincipalPart((1,)), trunc=30)
        self.assertLess(abs(value - (math.e - 1)), 1e-10)
        self.assertLess(tail, 1e-25)

    def test_exact_differential(self) -> None:
        alpha = laurent_expansion(RationalC(PolyC((-1,)), PolyC((0, 0, 1))), 0j, hi=30)
        value, _ = residue_exp_product(alpha, PrincipalPart((1,)), trunc=30)
        self.assertLess(abs(value), 1e-12)

    def test_non_decaying_series(self) -> None:
        alpha = laurent_expansion(RationalC(PolyC((1,)), PolyC((1, -40))), 0j, hi=23)
        with self.assertRaises(SeriesDivergence):
            residue_exp_product(alpha, PrincipalPart((1,)), trunc=23)

    def test_doubling_trunc_stays_within_tail_estimate(self) -> None:
        alpha = laurent_expansion(RationalC(PolyC((1,)), PolyC((1, -1))), 0j, hi=60)
        for h in (PrincipalPart((1,)), PrincipalPart((3,)), PrincipalPart((0.5, 1j))):
            short = residue_exp_product(alpha, h, trunc=30)
            long = residue_exp_product(alpha, h, trunc=60)
            self.assertLessEqual(abs(short.value - long.value), short.tail_estimate + 1e-14 * abs(long.value), h)

    def test_trunc_must_be_positive(self) -> None:
        alpha = laurent_expansion(RationalC.of(1), 0j, hi=3)
        with self.assertRaises(InputError):
            residue_exp_product(alpha, PrincipalPart((1,)), trunc=0)

    def test_complex_exponent(self) -> None:
        # Res(z^-1 e^(c/z), 0) = 1 for every c
        alpha = laurent_expansion(RationalC(PolyC((1,)), PolyC((0, 1))), 0j, hi=10)
        value, _ = residue_exp_product(alpha, PrincipalPart((cmath.exp(0.4j),)), trunc=10)
        self.assertAlmostEqual(value, 1)
