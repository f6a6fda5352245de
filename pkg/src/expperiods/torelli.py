"""
Recovering the exponent P' of a curve from its periods, and deciding whether two curves carry the same exp-algebraic structure.

The period matrix M of e^P has rows indexed by the standard cycles and columns by z^j, j = 0..d-1.
Since d(e^P) = P' e^P dz is exact, M (a_1, 2 a_2, ..., d a_d)^T = 0, and this vector spans the kernel of M.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .algebra import LaurentWindow, PolyC, PrincipalPart, RationalC, laurent_expansion, residue_exp_product
from .cohomology import DeRhamClass, reduce
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import IllConditionedKernel, InputError, RankDeficiency, ToleranceNotMet
from .homology import CycleBasis, standard_basis
from .quadrature import GaussKronrodRule, PeriodIntegrator, QuadratureRule
from .reports import VerificationReport

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodMatrix:
    """
    :param entries: (np.ndarray): The (d-1) x d matrix of periods of z^j e^P dz.
    :param errors: (np.ndarray): The error estimate of every entry.
    :param basis: (CycleBasis): The cycles indexing the rows.
    :param poly: (PolyC): The exponent P.
    """

    entries: np.ndarray
    errors: np.ndarray
    basis: CycleBasis
    poly: PolyC

    def __post_init__(self) -> None:
        d = self.degree
        assert self.entries.shape == (d - 1, d), f"A period matrix of degree {d} has shape {(d - 1, d)}, got {self.entries.shape}"
        assert self.errors.shape == self.entries.shape, "Every entry has an error estimate"

    @property
    def degree(self) -> int:
        assert self.poly.degree is not None
        return self.poly.degree

    def norm(self) -> float:
        """The spectral norm."""
        return float(np.linalg.norm(self.entries, 2))


@dataclass(frozen=True)
class RecoveryResult:
    """
    :param kernel_vector: (tuple[complex, ...]): v with v_j ~ (j + 1) a_(j+1), scaled so that the last entry is d.
    :param recovered_pprime: (PolyC): sum_j v_j z^j, the candidate for P'.
    :param scale_note: (str): How the kernel vector was normalised.
    :param residual: (float): |M v| / (|M| |v|).
    """

    kernel_vector: tuple[complex, ...]
    recovered_pprime: PolyC
    scale_note: str
    residual: float


def _degree_at_least_two(poly: PolyC) -> int:
    if poly.degree is None or poly.degree < 2:
        raise InputError(f"A period matrix needs an exponent of degree at least 2, got {poly}")
    return poly.degree


def build_period_matrix(poly: PolyC, tol: float = DEFAULT_TOLERANCES.quadrature, workers: int = 1,
                        rule: Optional[QuadratureRule] = None, tolerances: Tolerances = DEFAULT_TOLERANCES,
                        base_radius: Optional[float] = None) -> PeriodMatrix:
    """
    The period matrix over the standard basis. Rows may be computed concurrently; their order is the basis order.

    :param poly: (PolyC): The exponent P, degree d >= 2.
    :param tol: (float): Absolute tolerance of every entry.
    :param workers: (int): Number of threads evaluating rows.
    :param rule: (Optional[QuadratureRule]): Panel rule, Gauss-Kronrod by default.
    :param tolerances: (Tolerances): Numerical defaults.
    :param base_radius: (Optional[float]): Connector radius of the basis.
    :raises ToleranceNotMet: with the assembled matrix as partial result when an entry misses tol.
    """
    d = _degree_at_least_two(poly)
    assert workers >= 1, f"At least one worker is needed, got {workers}"
    basis = standard_basis(poly, base_radius)
    integrator = PeriodIntegrator(rule or GaussKronrodRule(), tolerances)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda cycle: integrator.period_row(poly, cycle, d - 1, tol), basis.cycles))
    entries = np.array([[p.value for p in row] for row in rows], dtype=complex)
    errors = np.array([[p.abs_error_estimate for p in row] for row in rows], dtype=float)
    matrix = PeriodMatrix(entries, errors, basis, poly)
    if not all(p.converged for row in rows for p in row):
        raise ToleranceNotMet(f"Some periods of degree {d} missed the tolerance {tol:.1e}; worst estimate {errors.max():.3e}",
                              partial=matrix)
    LOGGER.info("period matrix of degree %d assembled, largest error estimate %.2e", d, errors.max())
    return matrix


def verify_nondegeneracy(matrix: PeriodMatrix, tolerances: Tolerances = DEFAULT_TOLERANCES) -> tuple[int, float]:
    """
    Checks that M has numerical rank d - 1 and that its first d - 1 columns form an invertible block.

    :returns: (tuple[int, float]): The rank and the ratio of the block's smallest singular value to |M|.
    :raises RankDeficiency: when either check fails.
    """
    d = matrix.degree
    singular = np.linalg.svd(matrix.entries, compute_uv=False)
    norm = float(singular[0])
    threshold = max(d, 1) * norm * tolerances.rank_factor
    rank = int(np.sum(singular > threshold))
    block_min = float(np.linalg.svd(matrix.entries[:, :d - 1], compute_uv=False)[-1])
    ratio = block_min / norm if norm > 0 else 0.0
    if rank != d - 1 or ratio <= tolerances.rank_factor:
        raise RankDeficiency(f"Period matrix of degree {d} has rank {rank} and block ratio {ratio:.3e}; the quadrature is too coarse",
                             partial=(rank, ratio))
    return rank, ratio


def recover_derivative(matrix: PeriodMatrix, tolerances: Tolerances = DEFAULT_TOLERANCES) -> RecoveryResult:
    """
    The kernel of M as a candidate P', normalised so that its last entry is d (the value for a monic P).
    The recovery holds up to this normalisation only.

    :raises IllConditionedKernel: when the kernel is not numerically one-dimensional or cannot be normalised.
    """
    d = matrix.degree
    _, singular, vh = np.linalg.svd(matrix.entries)
    norm = float(singular[0])
    if singular[-1] <= max(d, 1) * norm * tolerances.rank_factor:
        raise IllConditionedKernel(f"Two comparable small singular values {singular[-2:]} in degree {d}")
    kernel = np.conj(vh[-1])
    if abs(kernel[-1]) <= tolerances.rank_factor * np.linalg.norm(kernel):
        raise IllConditionedKernel("The kernel vector has no component along z^(d-1)", partial=kernel)
    kernel = kernel * (d / kernel[-1])
    residual = float(np.linalg.norm(matrix.entries @ kernel) / (norm * np.linalg.norm(kernel)))
    LOGGER.info("recovered P' of degree %d, residual %.2e", d - 1, residual)
    return RecoveryResult(tuple(complex(v) for v in kernel), PolyC(tuple(kernel)), f"last entry set to {d}", residual)


def lemma_distinguisher(poly1: PolyC, poly2: PolyC, g2: PolyC, tolerances: Tolerances = DEFAULT_TOLERANCES) -> DeRhamClass:
    """
    The class of g2 e^P1 (P1' - P2') dz in the de Rham group of P1.
    It vanishes for every g2 when both exponents define the same structure.
    """
    if poly1.degree != poly2.degree:
        raise InputError(f"The distinguisher compares exponents of equal degree, got {poly1.degree} and {poly2.degree}")
    _degree_at_least_two(poly1)
    cohomology_class, _ = reduce(g2 * (poly1.derivative() - poly2.derivative()), poly1, tolerances)
    return cohomology_class


class Case2Row(NamedTuple):
    k: int
    residue: complex
    tail_estimate: float


def case2_residue_test(h: PrincipalPart, omega_factor: RationalC, multiplier: PolyC, kmax: int, trunc: int,
                       tolerances: Tolerances = DEFAULT_TOLERANCES) -> list[Case2Row]:
    """
    Truncated residues at 0 of z^k * multiplier * e^h * omega_factor for k = 0..kmax.
    They all vanish when the germ comes from a pair of equal structures; a clearly nonzero entry tells the structures apart.

    :param h: (PrincipalPart): The germ class at 0.
    :param omega_factor: (RationalC): The coefficient of the 1-form omega.
    :param multiplier: (PolyC): The polynomial factor.
    :param kmax: (int): Largest power k.
    :param trunc: (int): Last Laurent power used in each residue sum.
    :raises SeriesDivergence: if a residue series shows no decay.
    """
    assert kmax >= 0, f"kmax must be nonnegative, got {kmax}"
    rows = []
    for k in range(kmax + 1):
        factor = omega_factor * RationalC(PolyC.monomial(k) * multiplier)
        alpha: LaurentWindow = laurent_expansion(factor, 0j, hi=trunc)
        value, tail = residue_exp_product(alpha, h, trunc, tolerances)
        rows.append(Case2Row(k, value, tail))
    return rows


def _parallel_sine(first: np.ndarray, second: np.ndarray) -> float:
    """Sine of the angle between two complex lines."""
    if len(first) != len(second):
        return 1.0
    projection = (np.vdot(first, second) / np.vdot(first, first)) * first
    return float(np.linalg.norm(second - projection) / np.linalg.norm(second))


def torelli_verify(poly1: PolyC, poly2: PolyC, tol: float = DEFAULT_TOLERANCES.quadrature, workers: int = 1,
                   rule: Optional[QuadratureRule] = None, tolerances: Tolerances = DEFAULT_TOLERANCES) -> VerificationReport:
    """
    Decides whether e^P1 and e^P2 define the same exp-algebraic curve.
    The verdict is "same" when the recovered kernels are parallel and the distinguisher classes for g2 = 1, z, ..., z^d all vanish.

    :param poly1: (PolyC): The first exponent, degree >= 2.
    :param poly2: (PolyC): The second exponent, degree >= 2.
    :param tol: (float): Quadrature tolerance.
    :returns: (VerificationReport): Verdict and diagnostics, the first curve at top level.
    """
    summaries = []
    for poly in (poly1, poly2):
        matrix = build_period_matrix(poly, tol, workers, rule, tolerances)
        rank, ratio = verify_nondegeneracy(matrix, tolerances)
        recovery = recover_derivative(matrix, tolerances)
        summaries.append((matrix, rank, ratio, recovery))
    (m1, rank1, ratio1, rec1), (m2, rank2, ratio2, rec2) = summaries

    residuals = {"kernel_first": rec1.residual, "kernel_second": rec2.residual}
    if m1.degree != m2.degree:
        verdict, reason = "different", "degrees differ"
    else:
        sine = _parallel_sine(np.asarray(rec1.kernel_vector), np.asarray(rec2.kernel_vector))
        residuals["kernel_angle"] = sine
        scale = max(1.0, poly1.derivative().max_coefficient(), poly2.derivative().max_coefficient())
        norms = [lemma_distinguisher(poly1, poly2, PolyC.monomial(k), tolerances).norm() for k in range(m1.degree + 1)]
        residuals["max_class_norm"] = max(norms)
        if sine >= tolerances.parallel_angle:
            verdict, reason = "different", "recovered kernels are not parallel"
        elif max(norms) >= tolerances.class_norm * scale:
            witness = next(k for k, n in enumerate(norms) if n >= tolerances.class_norm * scale)
            verdict, reason = "different", f"distinguisher with g2 = z^{witness} is not exact"
        else:
            verdict, reason = "same", "parallel kernels and exact distinguishers"
    LOGGER.info("verdict %s: %s", verdict, reason)
    return VerificationReport(
        degree=m1.degree,
        rank=rank1,
        min_singular_ratio=ratio1,
        kernel=list(rec1.kernel_vector),
        recovered_Pprime=list(rec1.recovered_pprime.coeffs),
        verdict=verdict,
        residuals=residuals,
        second={
            "degree": m2.degree,
            "rank": rank2,
            "min_singular_ratio": ratio2,
            "kernel": list(rec2.kernel_vector),
            "recovered_Pprime": list(rec2.recovered_pprime.coeffs),
        },
        reason=reason,
    )
