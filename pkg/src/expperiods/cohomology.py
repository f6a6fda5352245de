"""
The de Rham group of exponential forms Q e^P dz modulo exact forms d(R e^P) = (R' + R P') e^P dz.
Every class has a unique representative sum_(k<d-1) c_k z^k e^P dz.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .algebra import PolyC
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import CertificateMismatch, InputError

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeRhamClass:
    """
    The class of sum_k coeffs[k] z^k e^P dz.

    :param poly: (PolyC): The exponent P, degree d >= 1.
    :param coeffs: (tuple[complex, ...]): c_0..c_(d-2), exactly d - 1 of them.
    """

    poly: PolyC
    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        assert self.poly.degree is not None and self.poly.degree >= 1, f"The exponent must have degree >= 1, got {self.poly}"
        assert len(self.coeffs) == self.poly.degree - 1, f"A class has {self.poly.degree - 1} coefficients, got {len(self.coeffs)}"

    def norm(self) -> float:
        return float(np.linalg.norm(np.asarray(self.coeffs, dtype=complex))) if self.coeffs else 0.0

    def is_zero(self, tolerance: float = 0.0) -> bool:
        return self.norm() <= tolerance

    def as_polynomial(self) -> PolyC:
        return PolyC(self.coeffs)

    def __add__(self, other: DeRhamClass) -> DeRhamClass:
        assert self.poly == other.poly, "Classes of different curves cannot be added"
        return DeRhamClass(self.poly, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, scalar: complex) -> DeRhamClass:
        return DeRhamClass(self.poly, tuple(scalar * c for c in self.coeffs))

    __rmul__ = __mul__


@dataclass(frozen=True)
class ReductionCertificate:
    """
    Witness of Q = sum c_k z^k + R' + R P'.

    :param r: (PolyC): The primitive factor R.
    :param residual: (float): Largest coefficient of Q - sum c_k z^k - R' - R P'.
    :param scale: (float): Largest coefficient magnitude among Q, R' and R P'.
    """

    r: PolyC
    residual: float
    scale: float


def exact_part(r: PolyC, poly: PolyC) -> PolyC:
    """R' + R P', the polynomial factor of d(R e^P)."""
    return r.derivative() + r * poly.derivative()


def reduce(q: PolyC, poly: PolyC, tolerances: Tolerances = DEFAULT_TOLERANCES) -> tuple[DeRhamClass, ReductionCertificate]:
    """
    Reduces Q e^P dz to its normal form by eliminating the top power of Q with d(c z^(n-d+1) e^P), c = q_n / (d a_d),
    until deg Q <= d - 2.

    :param q: (PolyC): The polynomial factor Q.
    :param poly: (PolyC): The exponent P, degree d >= 1.
    :param tolerances: (Tolerances): reduction_guard bounds the accepted certificate residual.
    :returns: (tuple[DeRhamClass, ReductionCertificate]): The class and its certificate.
    :raises CertificateMismatch: if the certificate does not reproduce Q.
    """
    d = poly.degree
    if d is None or d < 1:
        raise InputError(f"The exponent must have degree at least 1, got {poly}")
    size = max(len(q.coeffs), d - 1)
    work = np.zeros(size, dtype=complex)
    work[:len(q.coeffs)] = q.coeffs
    slopes = np.arange(1, d + 1) * np.asarray(poly.coeffs[1:], dtype=complex)
    primitive = np.zeros(max(size - d + 1, 1), dtype=complex)
    pivot = d * poly.leading
    for n in range(size - 1, d - 2, -1):
        c = work[n] / pivot
        if c == 0:
            continue
        shift = n - d + 1
        primitive[shift] += c
        work[shift:n + 1] -= c * slopes
        if shift >= 1:
            work[shift - 1] -= c * shift
        work[n] = 0
    r = PolyC(tuple(primitive))
    cohomology_class = DeRhamClass(poly, tuple(work[:d - 1]))

    exact = exact_part(r, poly)
    difference = q - cohomology_class.as_polynomial() - exact
    residual = difference.max_coefficient()
    scale = max(q.max_coefficient(), r.derivative().max_coefficient(), (r * poly.derivative()).max_coefficient())
    if residual > tolerances.reduction_guard * max(scale, 1e-300):
        raise CertificateMismatch(f"Reduction residual {residual:.3e} exceeds {tolerances.reduction_guard:.1e} * {scale:.3e}",
                                  partial=(cohomology_class, ReductionCertificate(r, residual, scale)))
    LOGGER.debug("reduced degree %s against degree %d: residual %.2e", q.degree, d, residual)
    return cohomology_class, ReductionCertificate(r, residual, scale)


def is_exact(q: PolyC, poly: PolyC, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """
    Whether Q e^P dz is exact, i.e. its class vanishes. The class counts as zero when its norm is below
    class_norm times the size of Q's coefficients.
    """
    cohomology_class, _ = reduce(q, poly, tolerances)
    return cohomology_class.is_zero(tolerances.class_norm * max(1.0, q.max_coefficient()))


def h1_dimension(poly: PolyC) -> int:
    """The dimension d - 1 of the de Rham group for deg P = d."""
    if poly.degree is None or poly.degree < 1:
        raise InputError(f"The exponent must have degree at least 1, got {poly}")
    return poly.degree - 1
