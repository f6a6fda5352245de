"""
In this module you will find the algebraic building blocks: complex polynomials, rational functions,
principal parts of meromorphic germs, and truncated Laurent series (windows) with the residue computations built on them.

All values are immutable. Coefficients are double precision complex numbers; every series coefficient computed here
is a finite sum, so "exact" means exact up to floating point rounding.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from random import Random
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InputError, SeriesDivergence

LOGGER = logging.getLogger(__name__)

ComplexLike = Union[complex, float, int]


class Infinity(Enum):
    """The point at infinity of the Riemann sphere."""

    POINT = "inf"

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"


INFINITY = Infinity.POINT

Point = Union[complex, Infinity]
"""A point of the Riemann sphere: a complex number or INFINITY."""


def _trim(coeffs: Iterable[ComplexLike]) -> tuple[complex, ...]:
    values = [complex(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class PolyC:
    """
    A polynomial with complex coefficients. The coefficient at index k belongs to z^k.
    Trailing zero coefficients are removed on construction, so two polynomials are equal exactly when their coefficient tuples are equal.
    The zero polynomial has no coefficients and its degree is None.

    :param coeffs: (Iterable[complex]): The coefficients, lowest power first.
    """

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @staticmethod
    def zero() -> PolyC:
        return PolyC(())

    @staticmethod
    def constant(value: ComplexLike) -> PolyC:
        return PolyC((value,))

    @staticmethod
    def monomial(power: int, coefficient: ComplexLike = 1) -> PolyC:
        """The polynomial coefficient * z^power."""
        assert power >= 0, f"A monomial needs a nonnegative power, got {power}"
        return PolyC((0,) * power + (coefficient,))

    @staticmethod
    def from_roots(roots: Sequence[ComplexLike], leading: ComplexLike = 1) -> PolyC:
        return PolyC(tuple(npoly.polyfromroots(np.asarray(roots, dtype=complex)) * complex(leading)))

    @property
    def degree(self) -> Optional[int]:
        """The degree, or None for the zero polynomial."""
        if not self.coeffs:
            return None
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        """The leading coefficient. The zero polynomial has leading coefficient 0."""
        return self.coeffs[-1] if self.coeffs else 0j

    def coefficient(self, power: int) -> complex:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return 0j

    def as_array(self) -> np.ndarray:
        """The coefficients as a complex numpy array. The zero polynomial gives [0]."""
        if not self.coeffs:
            return np.zeros(1, dtype=complex)
        return np.asarray(self.coeffs, dtype=complex)

    def norm1(self) -> float:
        """The sum of the absolute values of the coefficients."""
        return float(sum(abs(c) for c in self.coeffs))

    def max_coefficient(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __call__(self, z: Union[ComplexLike, np.ndarray]) -> Union[complex, np.ndarray]:
        return npoly.polyval(z, self.as_array())

    def __add__(self, other: Union[PolyC, ComplexLike]) -> PolyC:
        other = _as_poly(other)
        return PolyC(tuple(npoly.polyadd(self.as_array(), other.as_array())))

    def __radd__(self, other: ComplexLike) -> PolyC:
        return self + other

    def __neg__(self) -> PolyC:
        return PolyC(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union[PolyC, ComplexLike]) -> PolyC:
        return self + (-_as_poly(other))

    def __rsub__(self, other: ComplexLike) -> PolyC:
        return _as_poly(other) - self

    def __mul__(self, other: Union[PolyC, ComplexLike]) -> PolyC:
        if isinstance(other, PolyC):
            if self.is_zero() or other.is_zero():
                return PolyC.zero()
            return PolyC(tuple(npoly.polymul(self.as_array(), other.as_array())))
        return PolyC(tuple(complex(other) * c for c in self.coeffs))

    def __rmul__(self, other: ComplexLike) -> PolyC:
        return self * other

    def __truediv__(self, scalar: ComplexLike) -> PolyC:
        return PolyC(tuple(c / complex(scalar) for c in self.coeffs))

    def divmod(self, divisor: PolyC) -> tuple[PolyC, PolyC]:
        """
        Euclidean division.

        :param divisor: (PolyC): A nonzero polynomial.
        :returns: (tuple[PolyC, PolyC]): Quotient and remainder.
        """
        assert not divisor.is_zero(), "Division by the zero polynomial"
        quotient, remainder = npoly.polydiv(self.as_array(), divisor.as_array())
        return PolyC(tuple(quotient)), PolyC(tuple(remainder))

    def derivative(self) -> PolyC:
        """The derivative; the derivative of a constant is the zero polynomial."""
        if len(self.coeffs) <= 1:
            return PolyC.zero()
        return PolyC(tuple(npoly.polyder(self.as_array())))

    def compose_affine(self, scale: ComplexLike, shift: ComplexLike = 0) -> PolyC:
        """
        Returns the polynomial z -> self(scale * z + shift).

        :param scale: (complex): Multiplier of z.
        :param shift: (complex): Constant added after scaling.
        """
        if self.is_zero():
            return self
        inner = Polynomial([complex(shift), complex(scale)])
        return PolyC(tuple(Polynomial(self.as_array())(inner).coef))

    def roots(self) -> np.ndarray:
        if self.degree is None or self.degree == 0:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.as_array())

    def multiplicity_at(self, point: complex, tolerance: float = 1e-9) -> int:
        """
        The order of vanishing at a finite point, found by repeated deflation with (z - point).
        A value counts as zero when it is below tolerance relative to the size of the terms.

        :param point: (complex): Where to measure.
        :param tolerance: (float): Relative threshold for a vanishing value.
        :returns: (int): The multiplicity of point as a root; 0 if it is not a root.
        """
        assert not self.is_zero(), "The zero polynomial vanishes to infinite order"
        order = 0
        current = self
        while current.degree:
            scale = sum(abs(c) * abs(point) ** k for k, c in enumerate(current.coeffs))
            if abs(current(point)) > tolerance * max(scale, 1e-300):
                break
            current, _ = current.divmod(PolyC((-point, 1)))
            order += 1
        return order


def _as_poly(value: Union[PolyC, ComplexLike]) -> PolyC:
    if isinstance(value, PolyC):
        return value
    return PolyC.constant(value)


# An m-fold root comes back from the eigenvalue solver as m points spread by about eps^(1/m); 0.1 covers m <= 8.
CLUSTER_RADIUS = 0.1
MIN_CLUSTER_RADIUS = 1e-10


def _linked_groups(roots: Sequence[complex], radius: float) -> list[list[complex]]:
    """Single linkage: roots closer than radius (relative to max(1, |root|)) end up in one group."""
    groups: list[list[complex]] = []
    for root in sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag)):
        touching = [g for g in groups if any(abs(root - other) <= radius * max(1.0, abs(root), abs(other)) for other in g)]
        merged = [root]
        for group in touching:
            merged.extend(group)
            groups.remove(group)
        groups.append(merged)
    return groups


def _confirmed_groups(poly: PolyC, roots: Sequence[complex], radius: float, tolerance: float) -> list[tuple[complex, int]]:
    found: list[tuple[complex, int]] = []
    for group in _linked_groups(roots, radius):
        centre = sum(group) / len(group)
        if len(group) == 1 or radius <= MIN_CLUSTER_RADIUS or poly.multiplicity_at(centre, tolerance) == len(group):
            found.append((centre, len(group)))
        else:
            found.extend(_confirmed_groups(poly, group, radius / 10, tolerance))
    return found


def root_multiplicities(poly: PolyC, roots: Optional[Sequence[complex]] = None,
                        tolerance: float = 1e-9) -> list[tuple[complex, int]]:
    """
    The distinct roots of a polynomial with their multiplicities.

    Computed roots are grouped generously; a group of m roots is accepted when deflation confirms an m-fold root at its
    centre, otherwise it is split at a ten times smaller radius. The centre of an m-fold group is accurate to rounding
    even though its members are not.

    :param poly: (PolyC): A nonzero polynomial.
    :param roots: (Optional[Sequence[complex]]): A subset of the computed roots to group; all of them by default.
    :param tolerance: (float): Relative threshold passed to PolyC.multiplicity_at.
    :returns: (list[tuple[complex, int]]): Pairs (root, multiplicity); the multiplicities add up to the number of roots grouped.
    """
    if roots is None:
        roots = poly.roots()
    return _confirmed_groups(poly, roots, CLUSTER_RADIUS, tolerance)


@dataclass(frozen=True)
class RationalC:
    """
    A rational function num / den. The denominator is made monic and common roots of numerator and denominator
    are cancelled on construction, so that gcd(num, den) is constant.

    :param num: (PolyC): The numerator.
    :param den: (PolyC): The denominator, must not be zero. Defaults to 1.
    """

    num: PolyC
    den: PolyC = field(default_factory=lambda: PolyC.constant(1))

    def __post_init__(self) -> None:
        assert not self.den.is_zero(), "A rational function needs a nonzero denominator"
        num, den = self.num, self.den
        if num.is_zero():
            den = PolyC.constant(1)
        else:
            num, den = _cancel_common_roots(num, den)
        lead = den.leading
        object.__setattr__(self, "num", num / lead)
        object.__setattr__(self, "den", den / lead)

    @staticmethod
    def of(value: Union[PolyC, ComplexLike]) -> RationalC:
        return RationalC(_as_poly(value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, z: Union[ComplexLike, np.ndarray]) -> Union[complex, np.ndarray]:
        return self.num(z) / self.den(z)

    def __add__(self, other: Union[RationalC, PolyC, ComplexLike]) -> RationalC:
        other = _as_rational(other)
        return RationalC(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> RationalC:
        return RationalC(-self.num, self.den)

    def __sub__(self, other: Union[RationalC, PolyC, ComplexLike]) -> RationalC:
        return self + (-_as_rational(other))

    def __mul__(self, other: Union[RationalC, PolyC, ComplexLike]) -> RationalC:
        other = _as_rational(other)
        return RationalC(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: Union[RationalC, PolyC, ComplexLike]) -> RationalC:
        other = _as_rational(other)
        assert not other.is_zero(), "Division by the zero rational function"
        return RationalC(self.num * other.den, self.den * other.num)

    def derivative(self) -> RationalC:
        return RationalC(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def log_derivative(self) -> RationalC:
        """g'/g, the meromorphic form dg/g divided by dz."""
        assert not self.is_zero(), "The logarithmic derivative of 0 is undefined"
        return RationalC(self.num.derivative() * self.den - self.num * self.den.derivative(), self.num * self.den)

    def order_at(self, point: Point) -> int:
        """
        The order of this function at a point of the sphere: positive for zeros, negative for poles.

        :param point: (Point): A complex number or INFINITY.
        :returns: (int): ord_point(self).
        """
        if self.is_zero():
            raise InputError("The zero function has no order")
        if isinstance(point, Infinity):
            return _degree(self.den) - _degree(self.num)
        return self.num.multiplicity_at(point) - self.den.multiplicity_at(point)


def _degree(poly: PolyC) -> int:
    assert poly.degree is not None, "The zero polynomial has no degree"
    return poly.degree


def _as_rational(value: Union[RationalC, PolyC, ComplexLike]) -> RationalC:
    if isinstance(value, RationalC):
        return value
    return RationalC.of(value)


CANCEL_TOLERANCE = 1e-9


def _exact_quotient(poly: PolyC, factor: PolyC) -> Optional[PolyC]:
    """poly / factor, or None when the division leaves more than rounding behind."""
    quotient, remainder = poly.divmod(factor)
    if remainder.max_coefficient() > CANCEL_TOLERANCE * poly.max_coefficient():
        return None
    return quotient


def _cancel_common_roots(num: PolyC, den: PolyC) -> tuple[PolyC, PolyC]:
    if not (num.degree and den.degree):
        return num, den
    for root, count in root_multiplicities(den):
        shared = min(count, num.multiplicity_at(root))
        if shared == 0:
            continue
        factor = PolyC.from_roots([root] * shared)
        num_quotient, den_quotient = _exact_quotient(num, factor), _exact_quotient(den, factor)
        if num_quotient is None or den_quotient is None:
            LOGGER.debug("kept the common factor (z - %s)^%d: division is not exact", root, shared)
            continue
        num, den = num_quotient, den_quotient
        if not num.degree:
            break
    return num, den


@dataclass(frozen=True)
class PrincipalPart:
    """
    The canonical (pole only) representative h = sum_j c_j w^-j of a class [h] of meromorphic germs modulo holomorphic germs.
    The coordinate w is the local coordinate of the puncture the germ belongs to.

    :param neg_coeffs: (Sequence[complex]): c_1, ..., c_d, the coefficient of w^-j at index j - 1. The last one must be nonzero.
    """

    neg_coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = _trim(self.neg_coeffs)
        assert coeffs, "A principal part needs a pole, got only zero coefficients"
        object.__setattr__(self, "neg_coeffs", coeffs)

    @staticmethod
    def from_polynomial(poly: PolyC) -> PrincipalPart:
        """The class of a polynomial germ at infinity, i.e. P - P(0) written in w = 1/z."""
        return PrincipalPart(poly.coeffs[1:])

    @property
    def pole_order(self) -> int:
        return len(self.neg_coeffs)

    @property
    def leading(self) -> complex:
        """c_d, the coefficient of the most singular term."""
        return self.neg_coeffs[-1]

    def coefficient(self, power: int) -> complex:
        """The coefficient of w^power; zero for every power outside -d..-1."""
        if -self.pole_order <= power <= -1:
            return self.neg_coeffs[-power - 1]
        return 0j

    def as_polynomial(self) -> PolyC:
        """The germ as a polynomial in u = 1/w (zero constant term)."""
        return PolyC((0,) + self.neg_coeffs)

    def as_window(self) -> LaurentWindow:
        coeffs = tuple(self.coefficient(p) for p in range(-self.pole_order, 0))
        return LaurentWindow(lo=-self.pole_order, hi=-1, coeffs=coeffs, closed_below=True, closed_above=True)

    def __call__(self, w: Union[ComplexLike, np.ndarray]) -> Union[complex, np.ndarray]:
        return self.as_polynomial()(1 / np.asarray(w))

    def __add__(self, other: PrincipalPart) -> PrincipalPart:
        return PrincipalPart.from_polynomial(self.as_polynomial() + other.as_polynomial())


@dataclass(frozen=True)
class LaurentWindow:
    """
    A window on a Laurent series: the coefficients for the powers lo..hi.
    The flags record what is known outside the window: closed_below means every power below lo is zero,
    closed_above means every power above hi is zero. Without the flag the coefficients outside are unknown.

    :param lo: (int): Lowest power in the window.
    :param hi: (int): Highest power in the window.
    :param coeffs: (Sequence[complex]): Coefficients for lo..hi.
    :param tail_bound: (float): Bound on the absolute sum of coefficients that were omitted when the window was produced.
    :param closed_below: (bool): Whether all powers below lo vanish.
    :param closed_above: (bool): Whether all powers above hi vanish.
    """

    lo: int
    hi: int
    coeffs: tuple[complex, ...]
    tail_bound: float = 0.0
    closed_below: bool = False
    closed_above: bool = False

    def __post_init__(self) -> None:
        assert self.lo <= self.hi, f"A window needs lo <= hi, got {self.lo} > {self.hi}"
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        assert len(self.coeffs) == self.hi - self.lo + 1, f"Expected {self.hi - self.lo + 1} coefficients, got {len(self.coeffs)}"
        assert self.tail_bound >= 0, f"A tail bound is nonnegative, got {self.tail_bound}"

    def determines(self, power: int) -> bool:
        """Whether the coefficient of z^power is known."""
        if self.lo <= power <= self.hi:
            return True
        return (power < self.lo and self.closed_below) or (power > self.hi and self.closed_above)

    def coefficient(self, power: int) -> complex:
        """
        The coefficient of z^power.

        :raises InputError: when the window does not determine this coefficient.
        """
        if self.lo <= power <= self.hi:
            return self.coeffs[power - self.lo]
        if self.determines(power):
            return 0j
        raise InputError(f"The coefficient of z^{power} is outside the window {self.lo}..{self.hi}")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def _support(self) -> tuple[float, float]:
        return (self.lo if self.closed_below else -math.inf, self.hi if self.closed_above else math.inf)

    def __add__(self, other: LaurentWindow) -> LaurentWindow:
        lo = max([min(self.lo, other.lo)] + [w.lo for w in (self, other) if not w.closed_below])
        hi = min([max(self.hi, other.hi)] + [w.hi for w in (self, other) if not w.closed_above])
        if lo > hi:
            raise InputError("The two windows have no common determined power")
        coeffs = tuple(self.coefficient(p) + other.coefficient(p) for p in range(lo, hi + 1))
        return LaurentWindow(lo, hi, coeffs, self.tail_bound + other.tail_bound,
                             closed_below=self.closed_below and other.closed_below,
                             closed_above=self.closed_above and other.closed_above)

    def __mul__(self, other: LaurentWindow) -> LaurentWindow:
        s_lo, s_hi = self._support()
        o_lo, o_hi = other._support()
        determined = []
        for power in range(self.lo + other.lo, self.hi + other.hi + 1):
            needed_lo, needed_hi = max(s_lo, power - o_hi), min(s_hi, power - o_lo)
            known_lo, known_hi = max(self.lo, power - other.hi), min(self.hi, power - other.lo)
            if needed_lo > needed_hi or (known_lo <= needed_lo and needed_hi <= known_hi):
                determined.append(power)
        if not determined:
            raise InputError("The product of the two windows determines no coefficient")
        lo, hi = determined[0], determined[-1]
        assert determined == list(range(lo, hi + 1)), "Determined powers of a product form an interval"
        full = np.convolve(self.as_array(), other.as_array())
        offset = self.lo + other.lo
        coeffs = tuple(full[lo - offset:hi - offset + 1])
        self_mass = float(np.abs(self.as_array()).sum())
        other_mass = float(np.abs(other.as_array()).sum())
        tail = self.tail_bound * other_mass + other.tail_bound * self_mass + self.tail_bound * other.tail_bound
        return LaurentWindow(lo, hi, coeffs, tail,
                             closed_below=self.closed_below and other.closed_below,
                             closed_above=self.closed_above and other.closed_above)


def _series_quotient(num: np.ndarray, den: np.ndarray, terms: int) -> np.ndarray:
    """First terms Taylor coefficients of num/den, den[0] != 0."""
    out = np.zeros(terms, dtype=complex)
    for n in range(terms):
        acc = num[n] if n < len(num) else 0j
        upper = min(n, len(den) - 1)
        if upper >= 1:
            acc -= np.dot(den[1:upper + 1], out[n - 1::-1][:upper])
        out[n] = acc / den[0]
    return out


def _strip_low_zeros(coeffs: np.ndarray, tolerance: float) -> tuple[np.ndarray, int]:
    scale = float(np.abs(coeffs).max()) if len(coeffs) else 0.0
    order = 0
    while len(coeffs) > 1 and abs(coeffs[0]) <= tolerance * scale:
        coeffs = coeffs[1:]
        order += 1
    return coeffs, order


def laurent_expansion(w: RationalC, at: complex, hi: int) -> LaurentWindow:
    """
    Laurent expansion of a rational function at a finite point, in the variable u = z - at.
    The window starts at the order of w at the point (the pole order enters with a minus sign) and reaches at least power hi.

    :param w: (RationalC): The function to expand.
    :param at: (complex): The centre of the expansion.
    :param hi: (int): The highest power needed.
    :returns: (LaurentWindow): A window closed below; it is closed above as well when the expansion terminates.
    """
    if w.is_zero():
        return LaurentWindow(lo=hi, hi=hi, coeffs=(0j,), closed_below=True, closed_above=True)
    num = w.num.compose_affine(1, at).as_array()
    den = w.den.compose_affine(1, at).as_array()
    num, num_order = _strip_low_zeros(num, 1e-12)
    den, den_order = _strip_low_zeros(den, 1e-12)
    lo = num_order - den_order
    top = max(hi, lo)
    series = _series_quotient(num, den, top - lo + 1)
    terminates = len(den) == 1 and top - lo >= len(num) - 1
    return LaurentWindow(lo, top, tuple(series), closed_below=True, closed_above=terminates)


def exp_principal_series(h: PrincipalPart, lo: int) -> LaurentWindow:
    """
    The coefficients of e^h for the powers lo..0, h a pole-only germ.
    Writing u = 1/w, e^h is a power series E in u with E' = H'E, so n E_n = sum_k k H_k E_(n-k); every coefficient is a finite sum.
    All positive powers of e^h vanish, which the returned window records as closed_above.

    :param h: (PrincipalPart): The exponent.
    :param lo: (int): The most negative power wanted, lo <= 0.
    :returns: (LaurentWindow): Exact coefficients (tail_bound 0) for lo..0.
    """
    if lo > 0:
        raise InputError(f"e^h has no positive powers; the window must start at lo <= 0, got {lo}")
    depth = -lo
    hs = np.asarray((0j,) + h.neg_coeffs, dtype=complex)
    weighted = hs * np.arange(len(hs))
    series = np.zeros(depth + 1, dtype=complex)
    series[0] = 1
    for n in range(1, depth + 1):
        upper = min(n, h.pole_order)
        series[n] = np.dot(weighted[1:upper + 1], series[n - 1::-1][:upper]) / n
    return LaurentWindow(lo, 0, tuple(series[::-1]), closed_above=True)


def residue_meromorphic(w: RationalC, at: Point) -> complex:
    """
    The residue of the meromorphic 1-form w dz at a point of the sphere.
    At a finite point this is the coefficient of (z - at)^-1; at infinity it is the residue of -w(1/u)/u^2 at u = 0.

    :param w: (RationalC): The coefficient of dz.
    :param at: (Point): A complex number or INFINITY. Regular points give 0.
    """
    if w.is_zero():
        return 0j
    if isinstance(at, Infinity):
        dn, dd = _degree(w.num), _degree(w.den)
        index = dn - dd + 1
        if index < 0:
            return 0j
        rev_num = np.asarray(w.num.coeffs[::-1], dtype=complex)
        rev_den = np.asarray(w.den.coeffs[::-1], dtype=complex)
        return complex(-_series_quotient(rev_num, rev_den, index + 1)[index])
    return laurent_expansion(w, at, hi=-1).coefficient(-1)


def residue_pairing(xi: RationalC, h: PrincipalPart, at: Point) -> complex:
    """
    Res(xi * h, p) for the 1-form xi dz and a principal part h in the local coordinate of p
    (w = z - p at a finite point, w = 1/z at infinity).

    :param xi: (RationalC): The coefficient of the 1-form.
    :param h: (PrincipalPart): The germ class at the point.
    :param at: (Point): The point p.
    """
    if isinstance(at, Infinity):
        return residue_meromorphic(xi * RationalC(h.as_polynomial()), INFINITY)
    window = laurent_expansion(xi, at, hi=h.pole_order - 1) * h.as_window()
    return window.coefficient(-1)


class TruncatedResidue(NamedTuple):
    """A truncated residue together with its heuristic tail estimate."""

    value: complex
    tail_estimate: float


def residue_exp_product(alpha: LaurentWindow, h: PrincipalPart, trunc: int,
                        tolerances: Tolerances = DEFAULT_TOLERANCES) -> TruncatedResidue:
    """
    The residue at 0 of alpha * e^h, truncated after the power trunc of alpha:
    sum over m = alpha.lo..trunc of alpha_m * [e^h]_(-1-m).

    The tail estimate is the absolute mass of the last block of terms; it is a heuristic, not a proven bound.

    :param alpha: (LaurentWindow): A window closed below that determines every power up to trunc.
    :param h: (PrincipalPart): The exponent, a germ at 0.
    :param trunc: (int): The last power of alpha used, trunc >= 1.
    :param tolerances: (Tolerances): Supplies the block size and the number of blocks inspected for decay.
    :returns: (TruncatedResidue): The truncated value and the tail estimate.
    :raises SeriesDivergence: if the trailing blocks do not decay.
    """
    if trunc < 1:
        raise InputError(f"trunc must be at least 1, got {trunc}")
    if not alpha.closed_below:
        raise InputError("alpha must have a finite principal part (a window closed below)")
    if not alpha.determines(trunc):
        raise InputError(f"alpha determines powers up to {alpha.hi}, but trunc = {trunc}")
    series = exp_principal_series(h, lo=-1 - trunc)
    terms = [alpha.coefficient(m) * series.coefficient(-1 - m) for m in range(alpha.lo, trunc + 1)]
    if not terms:
        return TruncatedResidue(0j, 0.0)
    size = tolerances.residue_block
    # blocks end at trunc, so only the first one may be short
    blocks = [sum(abs(t) for t in terms[max(0, end - size):end]) for end in range(len(terms), 0, -size)][::-1]
    trailing = blocks[-tolerances.residue_span:]
    if len(trailing) == tolerances.residue_span and trailing[-1] > 0 and all(b >= a > 0 for a, b in zip(trailing, trailing[1:])):
        raise SeriesDivergence(f"Residue series blocks {trailing} do not decay at trunc = {trunc}",
                               partial=TruncatedResidue(complex(sum(terms)), blocks[-1]))
    LOGGER.debug("residue series: %d terms, last block %.2e", len(terms), blocks[-1])
    return TruncatedResidue(complex(sum(terms)), float(blocks[-1]))


def _unit_disc_sample(rng: Random) -> complex:
    return cmath.rect(math.sqrt(rng.random()), 2 * math.pi * rng.random())


def random_monic(degree: int, rng: Random) -> PolyC:
    """A monic polynomial of the given degree with lower coefficients drawn uniformly from the unit disc."""
    assert degree >= 1, f"A monic polynomial needs degree >= 1, got {degree}"
    return PolyC(tuple(_unit_disc_sample(rng) for _ in range(degree)) + (1,))


def random_poly(degree: int, rng: Random) -> PolyC:
    """A polynomial of exactly the given degree with coefficients in the unit disc (leading coefficient of modulus >= 1/2)."""
    assert degree >= 0, f"degree must be nonnegative, got {degree}"
    leading = cmath.rect(0.5 + 0.5 * rng.random(), 2 * math.pi * rng.random())
    return PolyC(tuple(_unit_disc_sample(rng) for _ in range(degree)) + (leading,))
