"""
The genus-zero exp-algebraic curve: the sphere with finitely many punctures, each carrying the class of a pole-only germ.
The module computes the descent directions (ramification points) and divisors of functions and 1-forms on the curve.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .algebra import INFINITY, Infinity, Point, PolyC, PrincipalPart, RationalC, residue_pairing, root_multiplicities
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InputError

LOGGER = logging.getLogger(__name__)

TWO_PI = 2 * math.pi


def _point_key(point: Point) -> tuple[int, float, float]:
    if isinstance(point, Infinity):
        return (1, 0.0, 0.0)
    return (0, point.real, point.imag)


def same_point(first: Point, second: Point, tolerance: float) -> bool:
    """Whether two points of the sphere coincide up to tolerance (relative to max(1, |point|))."""
    if isinstance(first, Infinity) or isinstance(second, Infinity):
        return first is second
    return abs(first - second) <= tolerance * max(1.0, abs(first), abs(second))


@dataclass(frozen=True)
class Puncture:
    """
    A puncture of the sphere with its germ class.

    :param location: (Point): The puncture; its local coordinate is z - location, or 1/z at infinity.
    :param principal_part: (PrincipalPart): The canonical representative of the germ class in that coordinate.
    """

    location: Point
    principal_part: PrincipalPart

    def __post_init__(self) -> None:
        if not isinstance(self.location, Infinity):
            object.__setattr__(self, "location", complex(self.location))

    @property
    def pole_order(self) -> int:
        return self.principal_part.pole_order


@dataclass(frozen=True)
class RamPoint:
    """
    An infinite order ramification point: a direction of approach to a puncture along which Re h tends to minus infinity.

    :param puncture_index: (int): Index of the puncture in the curve.
    :param sector_index: (int): Label 0..d-1 in increasing order of the angle.
    :param central_angle: (float): Angle in [0, 2 pi) of the central descent ray. For the puncture at infinity it is measured in the z-plane,
        for a finite puncture in the local coordinate.
    """

    puncture_index: int
    sector_index: int
    central_angle: float

    def __post_init__(self) -> None:
        assert 0 <= self.central_angle < TWO_PI, f"Central angles lie in [0, 2pi), got {self.central_angle}"

    @property
    def direction(self) -> complex:
        return cmath.exp(1j * self.central_angle)

    def signed_angle(self) -> float:
        """The central angle measured in (-pi, pi]."""
        return self.central_angle - TWO_PI if self.central_angle > math.pi else self.central_angle


@dataclass(frozen=True)
class ExpCurveGZ:
    """
    A genus-zero exp-algebraic curve.

    :param punctures: (tuple[Puncture, ...]): The punctures, at pairwise distinct locations.
    """

    punctures: tuple[Puncture, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "punctures", tuple(self.punctures))
        assert self.punctures, "A curve needs at least one puncture"
        for i, first in enumerate(self.punctures):
            for second in self.punctures[i + 1:]:
                assert not same_point(first.location, second.location, 0.0), f"Two punctures at {first.location}"

    @staticmethod
    def from_polynomial(poly: PolyC) -> ExpCurveGZ:
        """The curve of e^P: a single puncture at infinity with h = P (constant term dropped)."""
        if poly.degree is None or poly.degree < 1:
            raise InputError(f"The exponent must have degree at least 1, got {poly}")
        return ExpCurveGZ((Puncture(INFINITY, PrincipalPart.from_polynomial(poly)),))

    @property
    def d_total(self) -> int:
        """The total number of ramification points."""
        return sum(p.pole_order for p in self.punctures)

    def polynomial(self) -> PolyC:
        """The exponent P of a one-puncture-at-infinity curve."""
        if len(self.punctures) != 1 or not isinstance(self.punctures[0].location, Infinity):
            raise InputError("Only a curve with a single puncture at infinity has a polynomial exponent")
        return self.punctures[0].principal_part.as_polynomial()

    def puncture_at(self, point: Point, tolerance: float = DEFAULT_TOLERANCES.point_merge) -> Optional[Puncture]:
        for puncture in self.punctures:
            if same_point(puncture.location, point, tolerance):
                return puncture
        return None

    def same_structure(self, other: ExpCurveGZ, tolerance: float = DEFAULT_TOLERANCES.point_merge) -> bool:
        """Whether both curves have the same punctures carrying the same germ classes."""
        if len(self.punctures) != len(other.punctures):
            return False
        for puncture in self.punctures:
            match = other.puncture_at(puncture.location, tolerance)
            if match is None or match.principal_part != puncture.principal_part:
                return False
        return True


def ramification_points(curve: ExpCurveGZ) -> list[RamPoint]:
    """
    The ramification points of the curve, d_i of them at a puncture with pole order d_i.

    At infinity the germ is sum c_j z^j and the central rays are at (pi - arg c_d + 2 pi m) / d in the z-plane.
    At a finite puncture the germ is sum c_j w^-j and Re(c_d w^-d) is most negative at (arg c_d + pi + 2 pi m) / d.

    :param curve: (ExpCurveGZ): The curve.
    :returns: (list[RamPoint]): Grouped by puncture, each group sorted by angle in [0, 2 pi).
    """
    points: list[RamPoint] = []
    for index, puncture in enumerate(curve.punctures):
        d = puncture.pole_order
        phase = cmath.phase(puncture.principal_part.leading)
        base = math.pi - phase if isinstance(puncture.location, Infinity) else math.pi + phase
        angles = sorted((base + TWO_PI * m) / d % TWO_PI for m in range(d))
        points.extend(RamPoint(index, m, angle) for m, angle in enumerate(angles))
    return points


@dataclass(frozen=True)
class Divisor:
    """
    A finite formal sum of points of the sphere with nonzero integer multiplicities.

    :param support: (tuple[tuple[Point, int], ...]): Pairs (point, multiplicity). Zero multiplicities are dropped and
        the pairs are kept in a canonical order (finite points by real then imaginary part, infinity last).
    """

    support: tuple[tuple[Point, int], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(sorted(((p, n) for p, n in self.support if n != 0), key=lambda pair: _point_key(pair[0])))
        object.__setattr__(self, "support", pairs)

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[Point, int]], tolerance: float = DEFAULT_TOLERANCES.point_merge) -> Divisor:
        """Builds a divisor, adding up the multiplicities of points closer than tolerance."""
        merged: list[list] = []
        for point, multiplicity in pairs:
            for entry in merged:
                if same_point(entry[0], point, tolerance):
                    entry[1] += multiplicity
                    break
            else:
                merged.append([point, multiplicity])
        return Divisor(tuple((p, n) for p, n in merged))

    @property
    def degree(self) -> int:
        return sum(n for _, n in self.support)

    def points(self) -> list[Point]:
        return [p for p, _ in self.support]

    def multiplicity(self, point: Point, tolerance: float = DEFAULT_TOLERANCES.point_merge) -> int:
        return sum(n for p, n in self.support if same_point(p, point, tolerance))

    def approx_equal(self, other: Divisor, tolerance: float = DEFAULT_TOLERANCES.point_merge) -> bool:
        """Whether the two divisors agree up to moving points by less than tolerance."""
        difference = self + (-other)
        return not Divisor.from_pairs(difference.support, tolerance).support

    def __add__(self, other: Divisor) -> Divisor:
        return Divisor.from_pairs(self.support + other.support, tolerance=0.0)

    def __neg__(self) -> Divisor:
        return Divisor(tuple((p, -n) for p, n in self.support))

    def __repr__(self) -> str:
        inner = ", ".join(f"{p}: {n:+d}" for p, n in self.support)
        return f"Divisor({{{inner}}})"


def _snap(point: complex, curve: ExpCurveGZ, tolerance: float) -> Point:
    puncture = curve.puncture_at(point, tolerance)
    return puncture.location if puncture is not None else point


def _without_nearest(roots: np.ndarray, point: complex, count: int) -> np.ndarray:
    """The computed roots with the count of them closest to point removed."""
    if count == 0:
        return roots
    return roots[np.argsort(np.abs(roots - point))[count:]]


def _rational_divisor_pairs(g: RationalC, curve: ExpCurveGZ, tolerances: Tolerances) -> list[tuple[Point, int]]:
    if g.is_zero():
        raise InputError("The zero function has no divisor")
    pairs: list[tuple[Point, int]] = []
    remaining = {sign: poly.roots() for poly, sign in ((g.num, 1), (g.den, -1))}
    for puncture in curve.punctures:
        if isinstance(puncture.location, Infinity):
            continue
        for poly, sign in ((g.num, 1), (g.den, -1)):
            count = poly.multiplicity_at(puncture.location) if poly.degree else 0
            remaining[sign] = _without_nearest(remaining[sign], puncture.location, count)
            pairs.append((puncture.location, sign * count))
    for poly, sign in ((g.num, 1), (g.den, -1)):
        for root, count in root_multiplicities(poly, remaining[sign]):
            pairs.append((_snap(root, curve, tolerances.point_merge * 10), sign * count))
    pairs.append((INFINITY, g.order_at(INFINITY)))
    return pairs


def divisor_of(g: RationalC, curve: ExpCurveGZ, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Divisor:
    """
    The divisor of f = g * exp(h) on the curve. The exponential factor is a unit at every point,
    so the multiplicity at p is ord_p(g) in the local coordinate of p (at infinity: deg den - deg num).

    :param g: (RationalC): The rational factor, nonzero.
    :param curve: (ExpCurveGZ): The curve; numerically found points close to a puncture are placed on it.
    :raises InputError: if g is zero.
    """
    divisor = Divisor.from_pairs(_rational_divisor_pairs(g, curve, tolerances), tolerances.point_merge * 10)
    LOGGER.debug("divisor of %s: %s", g, divisor)
    return divisor


def degree_check(dv: Divisor) -> bool:
    """Whether the divisor has degree zero, as every divisor of a function on the curve does."""
    return dv.degree == 0


def form_divisor_of(alpha: RationalC, curve: ExpCurveGZ, tolerances: Tolerances = DEFAULT_TOLERANCES) -> Divisor:
    """
    The divisor of the 1-form alpha * exp(h) * dz. In the coordinate w = 1/z one has dz = -w^-2 dw,
    so the order at infinity is ord_infinity(alpha) - 2.

    :param alpha: (RationalC): The coefficient of dz, nonzero.
    :param curve: (ExpCurveGZ): The curve.
    """
    pairs = _rational_divisor_pairs(alpha, curve, tolerances) + [(INFINITY, -2)]
    return Divisor.from_pairs(pairs, tolerances.point_merge * 10)


def canonical_degree_check(dv: Divisor) -> bool:
    """Whether a divisor of a 1-form has the degree -2 of the canonical class of the sphere."""
    return dv.degree == -2


def residue_functional(xi: Union[RationalC, PolyC], curve: ExpCurveGZ) -> complex:
    """
    The functional xi -> sum_i Res(xi * h_i, p_i) on 1-forms xi dz.
    It vanishes exactly on the forms whose pairing with the curve's germ classes is trivial.

    :param xi: (RationalC): Coefficient of the 1-form.
    :param curve: (ExpCurveGZ): The curve.
    """
    form = xi if isinstance(xi, RationalC) else RationalC(xi)
    return complex(sum(residue_pairing(form, p.principal_part, p.location) for p in curve.punctures))
