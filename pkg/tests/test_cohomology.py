import random
from unittest import TestCase

import numpy as np

from expperiods.algebra import PolyC, random_monic, random_poly
from expperiods.cohomology import DeRhamClass, exact_part, h1_dimension, is_exact, reduce
from expperiods.errors import InputError
from expperiods.homology import standard_basis
from expperiods.quadrature import PeriodIntegrator

GAUSSIAN = PolyC.monomial(2)


class ReduceTest(TestCase):

    def test_derivative_of_exponent(self) -> None:
        cohomology_class, certificate = reduce(PolyC.monomial(1, 2), GAUSSIAN)
        self.assertEqual(cohomology_class.coeffs, (0,))
        self.assertEqual(certificate.r, PolyC((1,)))
        self.assertEqual(certificate.residual, 0)

    def test_second_moment(self) -> None:
        cohomology_class, certificate = reduce(PolyC.monomial(2), GAUSSIAN)
        self.assertAlmostEqual(cohomology_class.coeffs[0], -0.5)
        self.assertEqual(certificate.r, PolyC((0, 0.5)))

    def test_reduced_form(self) -> None:
        cohomology_class, certificate = reduce(PolyC.constant(1), GAUSSIAN)
        self.assertEqual(cohomology_class.coeffs, (1,))
        self.assertTrue(certificate.r.is_zero())

    def test_exponential_has_trivial_group(self) -> None:
        cohomology_class, certificate = reduce(PolyC((3, 1, 4)), PolyC((0, 2)))
        self.assertEqual(cohomology_class.coeffs, ())
        self.assertTrue(cohomology_class.is_zero())
        self.assertLess(certificate.residual, 1e-12 * certificate.scale)

    def test_constant_exponent_rejected(self) -> None:
        with self.assertRaises(InputError):
            reduce(PolyC.monomial(1), PolyC((2,)))

    def test_random_certificates(self) -> None:
        rng = random.Random(2024)
        for _ in range(100):
            poly = random_poly(rng.randint(1, 6), rng)
            q = random_poly(rng.randint(0, 14), rng)
            cohomology_class, certificate = reduce(q, poly)
            self.assertEqual(len(cohomology_class.coeffs), poly.degree - 1)
            difference = q - cohomology_class.as_polynomial() - exact_part(certificate.r, poly)
            self.assertLessEqual(difference.max_coefficient(), 1e-12 * certificate.scale)

    def test_linearity(self) -> None:
        rng = random.Random(31)
        for _ in range(20):
            poly = random_monic(rng.randint(2, 6), rng)
            first, second = random_poly(rng.randint(0, 12), rng), random_poly(rng.randint(0, 12), rng)
            alpha, beta = complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            combined, certificate = reduce(alpha * first + beta * second, poly)
            expected = alpha * reduce(first, poly)[0] + beta * reduce(second, poly)[0]
            np.testing.assert_allclose(combined.coeffs, expected.coeffs, atol=1e-12 * max(certificate.scale, 1.0))

    def test_idempotent_on_reduced_forms(self) -> None:
        rng = random.Random(5)
        for degree in range(2, 7):
            poly = random_monic(degree, rng)
            q = random_poly(degree - 2, rng)
            cohomology_class, certificate = reduce(q, poly)
            np.testing.assert_allclose(cohomology_class.coeffs, np.pad(q.as_array(), (0, degree - 1 - len(q.coeffs))))
            self.assertTrue(certificate.r.is_zero())


class IsExactTest(TestCase):

    def test_constructed_exact(self) -> None:
        cube = PolyC.monomial(3)
        self.assertTrue(is_exact(exact_part(PolyC((1, 0, 0, 1)), cube), cube))

    def test_gaussian_density(self) -> None:
        self.assertFalse(is_exact(PolyC.constant(1), GAUSSIAN))

    def test_zero(self) -> None:
        self.assertTrue(is_exact(PolyC.zero(), GAUSSIAN))


class DeRhamClassTest(TestCase):

    def test_wrong_length_rejected(self) -> None:
        with self.assertRaises(AssertionError):
            DeRhamClass(GAUSSIAN, (1, 2))

    def test_arithmetic(self) -> None:
        cls = DeRhamClass(PolyC.monomial(3), (1, 1j))
        self.assertEqual((cls + 2 * cls).coeffs, (3, 3j))
        self.assertAlmostEqual(cls.norm(), 2 ** 0.5)


class DimensionTest(TestCase):

    def test_dimension(self) -> None:
        self.assertEqual(h1_dimension(GAUSSIAN), 1)
        self.assertEqual(h1_dimension(PolyC.monomial(1)), 0)
        self.assertEqual(h1_dimension(PolyC((0, 1, 0, 0, 0, 1))), 4)

    def test_constant_rejected(self) -> None:
        with self.assertRaises(InputError):
            h1_dimension(PolyC((1,)))


class QuadratureCompatibilityTest(TestCase):

    def test_class_predicts_periods(self) -> None:
        rng = random.Random(64)
        integrator = PeriodIntegrator()
        tol = 1e-10
        for _ in range(5):
            poly = random_monic(rng.randint(2, 4), rng)
            q = random_poly(rng.randint(0, 6), rng)
            cohomology_class, _ = reduce(q, poly)
            for cycle in standard_basis(poly):
                direct = integrator.period(q, poly, cycle, tol)
                row = integrator.period_row(poly, cycle, poly.degree - 2, tol)
                predicted = sum(c * p.value for c, p in zip(cohomology_class.coeffs, row))
                budget = direct.abs_error_estimate + sum(abs(c) * p.abs_error_estimate for c, p in zip(cohomology_class.coeffs, row))
                self.assertLessEqual(abs(direct.value - predicted), budget)
