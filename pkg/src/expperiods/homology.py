"""
Contour representatives of relative homology classes for the curve of e^P (one puncture at infinity).
A relative cycle comes in from infinity along the central ray of one ramification point, follows a connector
near the origin, and leaves to infinity along the central ray of another.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Iterable, Optional

from .algebra import PolyC
from .curve import TWO_PI, ExpCurveGZ, RamPoint, ramification_points
from .errors import InputError
from .reports import complex_from_json, complex_to_json

LOGGER = logging.getLogger(__name__)

ARC_STEP = math.pi / 24
"""Largest angle spanned by one straight segment of a connector."""


@dataclass(frozen=True)
class Ray:
    """
    The half line {start_radius * e^(i angle) + t * e^(i angle) : t >= 0}.

    :param angle: (float): Direction of the ray.
    :param start_radius: (float): Distance of the inner endpoint from the origin.
    """

    angle: float
    start_radius: float

    def __post_init__(self) -> None:
        assert self.start_radius >= 0, f"A ray starts at a nonnegative radius, got {self.start_radius}"

    @property
    def direction(self) -> complex:
        return cmath.exp(1j * self.angle)

    @property
    def start(self) -> complex:
        return self.start_radius * self.direction


@dataclass(frozen=True)
class RelativeCycle:
    """
    A path from the ramification point source to the ramification point target. It is traversed as:
    inbound ray from infinity to its inner endpoint, then the connector vertices in order, then the outbound ray to infinity.

    :param source: (RamPoint): Where the path starts.
    :param target: (RamPoint): Where the path ends.
    :param inbound_ray: (Ray): The central ray of source, traversed inwards.
    :param connector: (tuple[complex, ...]): Polyline from the inner end of inbound_ray to the inner end of outbound_ray.
    :param outbound_ray: (Ray): The central ray of target, traversed outwards.
    :param orientation: (int): +1 when the path runs from the basis' base point, -1 for a reversed cycle.
    """

    source: RamPoint
    target: RamPoint
    inbound_ray: Ray
    connector: tuple[complex, ...]
    outbound_ray: Ray
    orientation: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "connector", tuple(complex(v) for v in self.connector))
        assert self.orientation in (1, -1), f"Orientation is +1 or -1, got {self.orientation}"
        assert len(self.connector) >= 2, "A connector has at least two vertices"
        assert math.isclose(self.inbound_ray.angle, self.source.central_angle), "The inbound ray is the source's central ray"
        assert math.isclose(self.outbound_ray.angle, self.target.central_angle), "The outbound ray is the target's central ray"
        scale = max(1.0, self.inbound_ray.start_radius, self.outbound_ray.start_radius)
        assert abs(self.connector[0] - self.inbound_ray.start) <= 1e-12 * scale, "The connector starts where the inbound ray ends"
        assert abs(self.connector[-1] - self.outbound_ray.start) <= 1e-12 * scale, "The connector ends where the outbound ray starts"

    def segments(self) -> list[tuple[complex, complex]]:
        return list(zip(self.connector, self.connector[1:]))

    def check_clearance(self, exclude: Iterable[complex], clearance: float) -> None:
        """
        Raises InputError when the connector passes closer than clearance to one of the excluded points.
        """
        for point in exclude:
            for a, b in self.segments():
                if _distance_to_segment(complex(point), a, b) <= clearance:
                    raise InputError(f"The connector passes within {clearance} of the excluded point {point}")

    def to_json(self) -> dict[str, Any]:
        return {
            "source": [self.source.puncture_index, self.source.sector_index, self.source.central_angle],
            "target": [self.target.puncture_index, self.target.sector_index, self.target.central_angle],
            "inbound_ray": [self.inbound_ray.angle, self.inbound_ray.start_radius],
            "connector": [complex_to_json(v) for v in self.connector],
            "outbound_ray": [self.outbound_ray.angle, self.outbound_ray.start_radius],
            "orientation": self.orientation,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> RelativeCycle:
        return RelativeCycle(
            source=RamPoint(*data["source"]),
            target=RamPoint(*data["target"]),
            inbound_ray=Ray(*data["inbound_ray"]),
            connector=tuple(complex_from_json(v) for v in data["connector"]),
            outbound_ray=Ray(*data["outbound_ray"]),
            orientation=data["orientation"],
        )


def _distance_to_segment(point: complex, a: complex, b: complex) -> float:
    if a == b:
        return abs(point - a)
    t = ((point - a) * (b - a).conjugate()).real / abs(b - a) ** 2
    return abs(point - (a + min(1.0, max(0.0, t)) * (b - a)))


@dataclass(frozen=True)
class CycleBasis:
    """
    The cycles gamma_1..gamma_(d-1), all starting at the base point w*_0.

    :param poly: (PolyC): The exponent P the basis was built for.
    :param cycles: (tuple[RelativeCycle, ...]): The cycles; empty when deg P <= 1.
    """

    poly: PolyC
    cycles: tuple[RelativeCycle, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cycles", tuple(self.cycles))
        degree = self.poly.degree or 0
        assert len(self.cycles) == max(degree - 1, 0), f"Expected {max(degree - 1, 0)} cycles, got {len(self.cycles)}"
        if self.cycles:
            base = self.cycles[0].source
            assert all(c.source == base for c in self.cycles), "All cycles start at the base point"
            targets = [c.target for c in self.cycles]
            assert len(set(targets)) == len(targets), "The targets are pairwise distinct"

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __getitem__(self, index: int) -> RelativeCycle:
        return self.cycles[index]


def default_base_radius(poly: PolyC) -> float:
    """
    The connector radius min(1, 1 / sum_(k>=1) |a_k|). On this circle |e^(P - P(0))| <= e.
    """
    mass = sum(abs(c) for c in poly.coeffs[1:])
    return min(1.0, 1.0 / mass) if mass > 0 else 1.0


def arc_connector(radius: float, start_angle: float, end_angle: float) -> tuple[complex, ...]:
    """
    Vertices of a polyline following the circle of the given radius counterclockwise from start_angle to end_angle.
    """
    sweep = (end_angle - start_angle) % TWO_PI
    steps = max(1, math.ceil(sweep / ARC_STEP))
    return tuple(radius * cmath.exp(1j * (start_angle + sweep * k / steps)) for k in range(steps + 1))


def standard_basis(poly: PolyC, base_radius: Optional[float] = None,
                   exclude: Iterable[complex] = (), clearance: float = 0.0) -> CycleBasis:
    """
    The standard cycle basis of the curve of e^P.

    The base point w*_0 is the ramification point whose central angle, measured in (-pi, pi], is smallest;
    the targets are the remaining ones in increasing order of that angle. Each cycle enters along the central ray of w*_0 down to base_radius,
    follows a counterclockwise arc to the central ray of the target and leaves along it.

    :param poly: (PolyC): The exponent P.
    :param base_radius: (Optional[float]): Connector radius, defaults to default_base_radius(P).
    :param exclude: (Iterable[complex]): Points the connector must keep clear of.
    :param clearance: (float): The required distance from the excluded points.
    :returns: (CycleBasis): deg P - 1 cycles, none when deg P <= 1.
    """
    if poly.degree is None or poly.degree < 1:
        raise InputError(f"The exponent must have degree at least 1, got {poly}")
    if poly.degree == 1:
        return CycleBasis(poly, ())
    radius = default_base_radius(poly) if base_radius is None else base_radius
    assert radius > 0, f"The connector radius must be positive, got {radius}"
    points: list[RamPoint] = sorted(ramification_points(ExpCurveGZ.from_polynomial(poly)), key=RamPoint.signed_angle)
    base, targets = points[0], points[1:]
    excluded = list(exclude)
    cycles = []
    for target in targets:
        cycle = RelativeCycle(
            source=base,
            target=target,
            inbound_ray=Ray(base.central_angle, radius),
            connector=arc_connector(radius, base.central_angle, target.central_angle),
            outbound_ray=Ray(target.central_angle, radius),
        )
        if excluded:
            cycle.check_clearance(excluded, clearance)
        cycles.append(cycle)
    LOGGER.debug("standard basis of degree %d at radius %g, base angle %g", poly.degree, radius, base.central_angle)
    return CycleBasis(poly, tuple(cycles))


def reverse(cycle: RelativeCycle) -> RelativeCycle:
    """The same path traversed backwards; its periods are the negated periods of the cycle."""
    return replace(cycle, source=cycle.target, target=cycle.source, inbound_ray=cycle.outbound_ray,
                   connector=cycle.connector[::-1], outbound_ray=cycle.inbound_ray, orientation=-cycle.orientation)
