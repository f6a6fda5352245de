"""
Numerical evaluation of exponential periods, the integrals of Q(z) e^P(z) dz over relative cycles.

A cycle is cut into three pieces: the inbound ray, the connector and the outbound ray. Each ray is truncated at a radius T
beyond which an explicit bound controls the neglected tail; the finite pieces are integrated by a globally adaptive panel rule.
"""

from __future__ import annotations

import heapq
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from class_resolver import ClassResolver

from .algebra import PolyC
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InputError
from .homology import Ray, RelativeCycle

LOGGER = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]
"""Maps an array of n real parameters to an (n, k) array of integrand values."""

RADIUS_GROWTH = 1.25
MAX_RADIUS_STEPS = 400


class QuadratureRule(ABC):
    """A nested pair of quadrature rules on one panel; the difference of the two results is the error estimate."""

    @abstractmethod
    def estimate(self, integrand: Integrand, a: float, b: float) -> tuple[np.ndarray, float, int]:
        """
        Integrates over the panel [a, b].

        :param integrand: (Integrand): The vector valued integrand.
        :param a: (float): Left end of the panel.
        :param b: (float): Right end of the panel.
        :returns: (tuple[np.ndarray, float, int]): The integral of every component, the largest componentwise error estimate
            and the number of integrand evaluations.
        """
        pass


class GaussKronrodRule(QuadratureRule):
    """The 7-point Gauss rule embedded in the 15-point Kronrod rule."""

    # Kronrod abscissae and weights; every second abscissa (from index 1) is a Gauss node.
    _XGK = np.array([
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
    ])
    _WGK = np.array([
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    ])
    _WG = np.array([
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    ])

    def __init__(self) -> None:
        self.nodes = np.concatenate([-self._XGK[:-1], self._XGK[::-1]])
        self.kronrod_weights = np.concatenate([self._WGK[:-1], self._WGK[::-1]])
        gauss = np.zeros(8)
        gauss[1::2] = self._WG
        self.gauss_weights = np.concatenate([gauss[:-1], gauss[::-1]])

    def estimate(self, integrand: Integrand, a: float, b: float) -> tuple[np.ndarray, float, int]:
        centre, half = (a + b) / 2, (b - a) / 2
        values = integrand(centre + half * self.nodes)
        kronrod = half * (self.kronrod_weights @ values)
        gauss = half * (self.gauss_weights @ values)
        return kronrod, float(np.max(np.abs(kronrod - gauss))), len(self.nodes)

    def __repr__(self) -> str:
        return "GaussKronrodRule()"


class GaussLegendreRule(QuadratureRule):
    """
    An n-point Gauss-Legendre rule checked against the 2n-point rule.

    :param points: (int): n, the size of the coarse rule.
    """

    def __init__(self, points: int = 8) -> None:
        assert points >= 2, f"A Gauss-Legendre pair needs at least 2 points, got {points}"
        self.points = points
        self.coarse = np.polynomial.legendre.leggauss(points)
        self.fine = np.polynomial.legendre.leggauss(2 * points)

    def estimate(self, integrand: Integrand, a: float, b: float) -> tuple[np.ndarray, float, int]:
        centre, half = (a + b) / 2, (b - a) / 2
        (xc, wc), (xf, wf) = self.coarse, self.fine
        coarse = half * (wc @ integrand(centre + half * xc))
        fine = half * (wf @ integrand(centre + half * xf))
        return fine, float(np.max(np.abs(fine - coarse))), 3 * self.points

    def __repr__(self) -> str:
        return f"GaussLegendreRule(points={self.points})"


quadrature_rule_resolver: ClassResolver[QuadratureRule] = ClassResolver(
    [GaussKronrodRule, GaussLegendreRule], base=QuadratureRule, default=GaussKronrodRule, suffix="Rule",
)
"""Looks up panel rules by name: "gausskronrod" or "gausslegendre"."""


@dataclass(frozen=True)
class AdaptiveResult:
    value: np.ndarray
    error: float
    evaluations: int
    converged: bool


def integrate_adaptive(rule: QuadratureRule, integrand: Integrand, a: float, b: float,
                       tol: float, max_subdivisions: int) -> AdaptiveResult:
    """
    Globally adaptive integration: the panel with the largest error estimate is bisected until the summed estimates drop below tol
    or max_subdivisions panels exist.
    """
    value, error, evaluations = rule.estimate(integrand, a, b)
    # (negated error, creation index, left, right, panel value); the index keeps ties away from the arrays.
    heap = [(-error, 0, a, b, value)]
    total_error = error
    created = 1
    while total_error > tol and len(heap) < max_subdivisions:
        worst, _, left, right, _ = heapq.heappop(heap)
        middle = (left + right) / 2
        total_error += worst
        for lo, hi in ((left, middle), (middle, right)):
            part, part_error, count = rule.estimate(integrand, lo, hi)
            evaluations += count
            total_error += part_error
            heapq.heappush(heap, (-part_error, created, lo, hi, part))
            created += 1
    total = np.sum([entry[4] for entry in heap], axis=0)
    total_error = sum(-entry[0] for entry in heap)
    return AdaptiveResult(np.asarray(total, dtype=complex), total_error, evaluations, total_error <= tol)


@dataclass(frozen=True)
class PeriodValue:
    """
    The result of one period computation.

    :param value: (complex): The period.
    :param abs_error_estimate: (float): Panel error estimates plus the bounds on both ray tails.
    :param truncation_radius: (float): The radius T where the rays were cut.
    :param evaluations: (int): Number of integrand evaluations.
    :param converged: (bool): Whether abs_error_estimate is within the requested tolerance.
    """

    value: complex
    abs_error_estimate: float
    truncation_radius: float
    evaluations: int
    converged: bool = True

    def __post_init__(self) -> None:
        assert self.abs_error_estimate >= 0, f"Error estimates are nonnegative, got {self.abs_error_estimate}"

    def to_json(self) -> dict:
        return {
            "value": complex(self.value),
            "abs_error_estimate": self.abs_error_estimate,
            "truncation_radius": self.truncation_radius,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def descent_rate(poly: PolyC, angle: float) -> float:
    """
    kappa = -cos(arg a_d + d * angle): Re(a_d z^d) = -kappa |a_d| |z|^d on the ray. Positive exactly on descent rays.
    """
    degree = poly.degree or 0
    return -math.cos(np.angle(poly.leading) + degree * angle)


def truncation_radius(poly: PolyC, angle: float, start_radius: float, weight: float, power: int, tail_tol: float) -> tuple[float, float]:
    """
    A radius T beyond which the integral of weight * r^power * e^Re P(r e^(i angle)) over the ray is below tail_tol.

    For r >= T0 = max(1, 4 S / (kappa |a_d|)), S the sum of the lower coefficient moduli, one has Re P <= -c r^d with c = kappa |a_d| / 2.
    The function f(r) = weight r^power e^(-c r^d) is log-concave there, so its tail beyond T is at most f(T) / (c d T^(d-1) - power / T).

    :param poly: (PolyC): The exponent P.
    :param angle: (float): Direction of the ray.
    :param start_radius: (float): Inner end of the ray.
    :param weight: (float): Bound on the integrand polynomial's coefficient sum.
    :param power: (int): Degree of the integrand polynomial.
    :param tail_tol: (float): The target for the tail.
    :returns: (tuple[float, float]): T and the tail bound at T.
    :raises InputError: if the ray is not a descent ray of P.
    """
    degree = poly.degree
    if degree is None or degree < 1:
        raise InputError(f"The exponent must have degree at least 1, got {poly}")
    kappa = descent_rate(poly, angle)
    if kappa <= 1e-12:
        raise InputError(f"The ray at angle {angle} is not a descent ray of P (kappa = {kappa})")
    lead = abs(poly.leading)
    lower = sum(abs(c) for c in poly.coeffs[:-1])
    rate = kappa * lead / 2
    radius = max(1.0, 4 * lower / (kappa * lead), start_radius)
    for _ in range(MAX_RADIUS_STEPS):
        slope = rate * degree * radius ** (degree - 1) - power / radius
        if slope > 0 and weight > 0:
            log_tail = math.log(weight) + power * math.log(radius) - rate * radius ** degree - math.log(slope)
            if log_tail < math.log(tail_tol):
                return radius, math.exp(log_tail)
        elif weight == 0:
            return radius, 0.0
        radius *= RADIUS_GROWTH
    raise InputError(f"No truncation radius found on the ray at angle {angle}")


def _exp_integrand(polys: Sequence[PolyC], poly: PolyC, path: Callable[[np.ndarray], np.ndarray], velocity: complex) -> Integrand:
    arrays = [q.as_array() for q in polys]

    def integrand(t: np.ndarray) -> np.ndarray:
        z = path(t)
        factor = np.exp(poly(z)) * velocity
        return np.stack([np.polynomial.polynomial.polyval(z, c) * factor for c in arrays], axis=-1)

    return integrand


@dataclass
class PeriodIntegrator:
    """
    Computes periods with a given panel rule.

    :param rule: (QuadratureRule): The nested rule used on every panel.
    :param tolerances: (Tolerances): Supplies max_subdivisions.
    """

    rule: QuadratureRule = field(default_factory=GaussKronrodRule)
    tolerances: Tolerances = DEFAULT_TOLERANCES

    def periods(self, polys: Sequence[PolyC], poly: PolyC, cycle: RelativeCycle, tol: float) -> list[PeriodValue]:
        """
        The periods of q e^P dz over the cycle for every q in polys, from one shared set of panels and one truncation radius.

        The error budget is tol / 2 for the panels of the three pieces (tol / 6 each) and tol / 4 for each ray tail.
        """
        assert tol > 0, f"The tolerance must be positive, got {tol}"
        if poly.degree is None or poly.degree < 1:
            raise InputError(f"The exponent must have degree at least 1, got {poly}")
        weight = max((q.norm1() for q in polys), default=0.0)
        power = max((q.degree or 0 for q in polys), default=0)
        radius = max(truncation_radius(poly, ray.angle, ray.start_radius, weight, power, tol / 4)[0]
                     for ray in (cycle.inbound_ray, cycle.outbound_ray))
        tails = 0.0
        for ray in (cycle.inbound_ray, cycle.outbound_ray):
            _, tail = truncation_radius(poly, ray.angle, radius, weight, power, tol / 4)
            tails += tail

        piece_tol = tol / 6
        inbound = self._ray(polys, poly, cycle.inbound_ray, radius, piece_tol)
        outbound = self._ray(polys, poly, cycle.outbound_ray, radius, piece_tol)
        segments = cycle.segments()
        connector = [
            integrate_adaptive(self.rule, _exp_integrand(polys, poly, lambda t, a=a, b=b: a + t * (b - a), b - a),
                               0.0, 1.0, piece_tol / len(segments), self.tolerances.max_subdivisions)
            for a, b in segments
        ]

        value = outbound.value - inbound.value + np.sum([c.value for c in connector], axis=0)
        error = inbound.error + outbound.error + sum(c.error for c in connector) + tails
        evaluations = inbound.evaluations + outbound.evaluations + sum(c.evaluations for c in connector)
        converged = error <= tol
        LOGGER.debug("cycle %s -> %s: T = %.3f, error %.3e, %d evaluations",
                     cycle.source.sector_index, cycle.target.sector_index, radius, error, evaluations)
        if not converged:
            LOGGER.warning("period tolerance %.1e not met: error estimate %.3e", tol, error)
        return [PeriodValue(complex(v), float(error), radius, evaluations, converged) for v in value]

    def _ray(self, polys: Sequence[PolyC], poly: PolyC, ray: Ray, radius: float, tol: float) -> AdaptiveResult:
        direction = ray.direction
        return integrate_adaptive(self.rule, _exp_integrand(polys, poly, lambda r: r * direction, direction),
                                  ray.start_radius, radius, tol, self.tolerances.max_subdivisions)

    def period(self, q: PolyC, poly: PolyC, cycle: RelativeCycle, tol: float) -> PeriodValue:
        return self.periods([q], poly, cycle, tol)[0]

    def period_row(self, poly: PolyC, cycle: RelativeCycle, maxpow: int, tol: float) -> list[PeriodValue]:
        assert maxpow >= 0, f"maxpow must be nonnegative, got {maxpow}"
        return self.periods([PolyC.monomial(j) for j in range(maxpow + 1)], poly, cycle, tol)


def period(q: PolyC, poly: PolyC, cycle: RelativeCycle, tol: float = DEFAULT_TOLERANCES.quadrature,
           rule: Optional[QuadratureRule] = None) -> PeriodValue:
    """
    The period of Q e^P dz over a relative cycle.
    An unmet tolerance does not raise: the result comes back with converged False.

    :param q: (PolyC): The polynomial factor Q.
    :param poly: (PolyC): The exponent P, degree >= 1.
    :param cycle: (RelativeCycle): A cycle whose rays are descent rays of P.
    :param tol: (float): Absolute error target.
    :param rule: (Optional[QuadratureRule]): Panel rule, Gauss-Kronrod by default.
    """
    return PeriodIntegrator(rule or GaussKronrodRule()).period(q, poly, cycle, tol)


def period_row(poly: PolyC, cycle: RelativeCycle, maxpow: int, tol: float = DEFAULT_TOLERANCES.quadrature,
               rule: Optional[QuadratureRule] = None) -> list[PeriodValue]:
    """The periods of z^j e^P dz for j = 0..maxpow over one cycle."""
    return PeriodIntegrator(rule or GaussKronrodRule()).period_row(poly, cycle, maxpow, tol)
