import math
import random
from unittest import TestCase

from expperiods.algebra import PolyC, random_monic
from expperiods.cohomology import h1_dimension
from expperiods.errors import InputError
from expperiods.homology import RelativeCycle, arc_connector, default_base_radius, reverse, standard_basis


class StandardBasisTest(TestCase):

    def test_gaussian(self) -> None:
        basis = standard_basis(PolyC.monomial(2))
        self.assertEqual(len(basis), 1)
        cycle = basis[0]
        self.assertAlmostEqual(cycle.inbound_ray.angle, 3 * math.pi / 2)
        self.assertAlmostEqual(cycle.outbound_ray.angle, math.pi / 2)
        self.assertEqual(cycle.orientation, 1)
        # the counterclockwise arc from -i to i passes through the right half plane
        self.assertTrue(all(v.real >= -1e-12 for v in cycle.connector))

    def test_exponential_has_no_cycles(self) -> None:
        self.assertEqual(len(standard_basis(PolyC.monomial(1))), 0)

    def test_cubic(self) -> None:
        basis = standard_basis(PolyC.monomial(3))
        self.assertEqual(len(basis), 2)
        for k, cycle in enumerate(basis):
            self.assertAlmostEqual(cycle.outbound_ray.angle, math.pi / 3 + 2 * math.pi / 3 * k)
            self.assertAlmostEqual(cycle.inbound_ray.angle, 5 * math.pi / 3)

    def test_rays_descend(self) -> None:
        rng = random.Random(21)
        for degree in range(2, 7):
            poly = random_monic(degree, rng)
            for cycle in standard_basis(poly):
                for ray in (cycle.inbound_ray, cycle.outbound_ray):
                    values = [poly(r * ray.direction).real for r in (4.0, 8.0, 16.0, 32.0)]
                    self.assertTrue(all(b < a for a, b in zip(values, values[1:])))

    def test_connector_meets_rays(self) -> None:
        for cycle in standard_basis(PolyC((0, 0.5, 0.2, 1))):
            self.assertAlmostEqual(abs(cycle.connector[0] - cycle.inbound_ray.start), 0)
            self.assertAlmostEqual(abs(cycle.connector[-1] - cycle.outbound_ray.start), 0)

    def test_dimension(self) -> None:
        rng = random.Random(8)
        for degree in range(1, 7):
            poly = random_monic(degree, rng)
            self.assertEqual(len(standard_basis(poly)), h1_dimension(poly))

    def test_deterministic(self) -> None:
        poly = random_monic(4, random.Random(2))
        self.assertEqual(standard_basis(poly), standard_basis(poly))

    def test_base_radius(self) -> None:
        self.assertEqual(default_base_radius(PolyC.monomial(2)), 1.0)
        self.assertAlmostEqual(default_base_radius(PolyC((7, 2, 0, 2))), 0.25)
        basis = standard_basis(PolyC.monomial(2), base_radius=2.0)
        self.assertAlmostEqual(abs(basis[0].connector[3]), 2.0)

    def test_exclusion(self) -> None:
        with self.assertRaises(InputError):
            standard_basis(PolyC.monomial(2), exclude=[1 + 0j], clearance=0.05)
        self.assertEqual(len(standard_basis(PolyC.monomial(2), exclude=[0j], clearance=0.5)), 1)

    def test_constant_rejected(self) -> None:
        with self.assertRaises(InputError):
            standard_basis(PolyC((1,)))


class RelativeCycleTest(TestCase):

    def setUp(self) -> None:
        self.cycle = standard_basis(PolyC.monomial(3))[1]

    def test_reverse(self) -> None:
        reversed_cycle = reverse(self.cycle)
        self.assertEqual(reversed_cycle.source, self.cycle.target)
        self.assertEqual(reversed_cycle.target, self.cycle.source)
        self.assertEqual(reversed_cycle.orientation, -1)
        self.assertEqual(reverse(reversed_cycle), self.cycle)

    def test_json(self) -> None:
        self.assertEqual(RelativeCycle.from_json(self.cycle.to_json()), self.cycle)

    def test_arc(self) -> None:
        vertices = arc_connector(1.0, 3 * math.pi / 2, math.pi / 2)
        self.assertAlmostEqual(vertices[0], -1j)
        self.assertAlmostEqual(vertices[-1], 1j)
        self.assertAlmostEqual(vertices[len(vertices) // 2], 1)
