"""
The command line interface. Every command builds a RunConfig and hands it to run, which executes the pipeline and writes
a JSON report to standard output or to --output. Exit codes: 0 success, 1 input error, 2 failed numerical verification.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional

import click

from .algebra import PolyC, PrincipalPart, RationalC, random_monic
from .cohomology import h1_dimension, reduce
from .config import DEFAULT_TOLERANCES, TOLERANCE_ENV_VAR
from .curve import ExpCurveGZ, ramification_points
from .errors import InputError, ToleranceNotMet, VerificationFailure
from .homology import standard_basis
from .parsing import parse_curve_spec, parse_poly
from .plotting import plot_surface
from .quadrature import PeriodIntegrator, quadrature_rule_resolver
from .reports import Case2Report, PeriodsReport, RecoveryReport, ReductionReport, Report, SurfaceInfoReport
from .torelli import PeriodMatrix, build_period_matrix, case2_residue_test, recover_derivative, torelli_verify, verify_nondegeneracy

LOGGER = logging.getLogger(__name__)


class Command(str, Enum):
    SURFACE_INFO = "surface-info"
    PERIODS = "periods"
    REDUCE = "reduce"
    RECOVER = "recover"
    VERIFY = "verify"
    CASE2 = "case2"


@dataclass
class RunConfig:
    """
    Everything a command needs. Only the fields used by the command matter; validate checks that they are present.

    :attr command: (Command): The pipeline to run.
    :attr input_path: (Optional[str]): A curve-spec JSON file giving the exponent.
    :attr tol: (float): Absolute quadrature tolerance.
    :attr maxpow: (Optional[int]): Highest power for periods, d - 1 by default.
    :attr seed: (int): Seed of the random exponent.
    :attr output: (Optional[str]): Report file; standard output when absent.
    :attr plot: (bool): Whether to write an SVG figure next to the report.
    """

    command: Command
    input_path: Optional[str] = None
    tol: float = DEFAULT_TOLERANCES.quadrature
    maxpow: Optional[int] = None
    seed: int = 0
    output: Optional[str] = None
    plot: bool = False
    poly: Optional[str] = None
    poly2: Optional[str] = None
    q: Optional[str] = None
    principal_part: Optional[str] = None
    omega_num: str = "1"
    omega_den: str = "1"
    multiplier: str = "1"
    kmax: int = 0
    trunc: int = 30
    rule: str = "gausskronrod"
    workers: int = 1
    random_degree: Optional[int] = None

    def __post_init__(self) -> None:
        self.command = Command(self.command)

    def validate(self) -> None:
        """Checks the command specific fields before anything is computed."""
        if not self.tol > 0:
            raise InputError(f"The tolerance must be positive, got {self.tol}")
        if self.random_degree is not None and self.random_degree < 1:
            raise InputError(f"A random exponent needs degree >= 1, got {self.random_degree}")
        if self.command != Command.CASE2 and not (self.poly or self.input_path or self.random_degree):
            raise InputError(f"{self.command.value} needs --poly, --input or --random-degree")
        if self.command == Command.REDUCE and self.q is None:
            raise InputError("reduce needs --q")
        if self.command == Command.VERIFY and self.poly2 is None:
            raise InputError("verify needs --poly2")
        if self.command == Command.CASE2:
            if self.principal_part is None:
                raise InputError("case2 needs --principal-part")
            if not parse_poly(self.principal_part).degree:
                raise InputError(f"The principal part must be a non-constant polynomial, got {self.principal_part!r}")
            if parse_poly(self.omega_den).is_zero():
                raise InputError("The denominator of omega must not be zero")
        if self.maxpow is not None and self.maxpow < 0:
            raise InputError(f"maxpow must be nonnegative, got {self.maxpow}")
        if self.trunc < 1 or self.kmax < 0:
            raise InputError(f"case2 needs trunc >= 1 and kmax >= 0, got {self.trunc} and {self.kmax}")
        if self.workers < 1:
            raise InputError(f"At least one worker is needed, got {self.workers}")

    def exponent(self) -> PolyC:
        """The exponent P from --poly, the curve spec file, or a random monic polynomial."""
        if self.poly:
            return parse_poly(self.poly)
        if self.input_path:
            try:
                text = Path(self.input_path).read_text()
            except OSError as error:
                raise InputError(f"Cannot read {self.input_path}: {error}") from error
            return parse_curve_spec(text).polynomial()
        assert self.random_degree is not None
        return random_monic(self.random_degree, random.Random(self.seed))

    def plot_path(self) -> Path:
        return Path(self.output).with_suffix(".svg") if self.output else Path("exp-periods.svg")


def _surface_info(config: RunConfig) -> Report:
    poly = config.exponent()
    curve = ExpCurveGZ.from_polynomial(poly)
    basis = standard_basis(poly)
    if config.plot:
        plot_surface(poly, basis, config.plot_path())
    return SurfaceInfoReport(
        poly=list(poly.coeffs),
        degree=curve.d_total,
        ramification_angles=[p.central_angle for p in ramification_points(curve)],
        h1_dimension=h1_dimension(poly),
        cycles=[c.to_json() for c in basis],
    )


def _periods(config: RunConfig) -> Report:
    poly = config.exponent()
    basis = standard_basis(poly)
    if not len(basis):
        raise InputError("An exponent of degree 1 has no relative cycles")
    maxpow = config.maxpow if config.maxpow is not None else len(basis)
    integrator = PeriodIntegrator(quadrature_rule_resolver.make(config.rule))
    rows = [integrator.period_row(poly, cycle, maxpow, config.tol) for cycle in basis]
    if config.plot:
        plot_surface(poly, basis, config.plot_path())
    report = PeriodsReport(list(poly.coeffs), maxpow, config.tol, [[p.to_json() for p in row] for row in rows])
    if not all(p.converged for row in rows for p in row):
        raise _tolerance_failure(config.tol, report)
    return report


def _tolerance_failure(tol: float, report: Report) -> VerificationFailure:
    return ToleranceNotMet(f"Some periods missed the tolerance {tol:.1e}", partial=report)


def _reduce(config: RunConfig) -> Report:
    poly = config.exponent()
    assert config.q is not None
    q = parse_poly(config.q)
    cohomology_class, certificate = reduce(q, poly)
    exact = cohomology_class.is_zero(DEFAULT_TOLERANCES.class_norm * max(1.0, q.max_coefficient()))
    return ReductionReport(list(poly.coeffs), list(q.coeffs), list(cohomology_class.coeffs),
                           list(certificate.r.coeffs), certificate.residual, exact)


def _matrix_report(matrix: PeriodMatrix, tol: float) -> PeriodsReport:
    rows = [[{"value": complex(v), "abs_error_estimate": float(e), "converged": bool(e <= tol)}
             for v, e in zip(values, errors)] for values, errors in zip(matrix.entries, matrix.errors)]
    return PeriodsReport(list(matrix.poly.coeffs), matrix.degree - 1, tol, rows)


def _recover(config: RunConfig) -> Report:
    poly = config.exponent()
    matrix = build_period_matrix(poly, config.tol, config.workers, quadrature_rule_resolver.make(config.rule))
    if config.plot:
        plot_surface(poly, matrix.basis, config.plot_path())
    rank, ratio = verify_nondegeneracy(matrix)
    recovery = recover_derivative(matrix)
    return RecoveryReport(matrix.degree, rank, ratio, list(recovery.kernel_vector), list(recovery.recovered_pprime.coeffs),
                          recovery.residual, [list(row) for row in matrix.entries.astype(complex).tolist()])


def _verify(config: RunConfig) -> Report:
    assert config.poly2 is not None
    return torelli_verify(config.exponent(), parse_poly(config.poly2), config.tol, config.workers,
                          quadrature_rule_resolver.make(config.rule))


def _case2(config: RunConfig) -> Report:
    assert config.principal_part is not None
    h = PrincipalPart.from_polynomial(parse_poly(config.principal_part))
    omega = RationalC(parse_poly(config.omega_num), parse_poly(config.omega_den))
    rows = case2_residue_test(h, omega, parse_poly(config.multiplier), config.kmax, config.trunc)
    return Case2Report(list(h.neg_coeffs), config.kmax, config.trunc,
                       [{"k": r.k, "residue": r.residue, "tail_estimate": r.tail_estimate} for r in rows])


PIPELINES: dict[Command, Callable[[RunConfig], Report]] = {
    Command.SURFACE_INFO: _surface_info,
    Command.PERIODS: _periods,
    Command.REDUCE: _reduce,
    Command.RECOVER: _recover,
    Command.VERIFY: _verify,
    Command.CASE2: _case2,
}


def _write(report: Report, config: RunConfig) -> None:
    text = report.to_json()
    if config.output:
        Path(config.output).write_text(text + "\n")
    else:
        click.echo(text)


def run(config: RunConfig) -> int:
    """
    Executes the configured pipeline and writes its report.

    :param config: (RunConfig): The request.
    :returns: (int): 0 on success, 1 for an input error, 2 for a failed verification (a partial report is written when one exists).
    """
    try:
        config.validate()
        _write(PIPELINES[config.command](config), config)
        return 0
    except InputError as error:
        click.echo(f"input error: {error}", err=True)
        return 1
    except VerificationFailure as error:
        click.echo(f"verification failed: {error}", err=True)
        partial: Any = error.partial
        if isinstance(partial, PeriodMatrix):
            partial = _matrix_report(partial, config.tol)
        if isinstance(partial, Report):
            _write(partial, config)
        return 2


def _common_options(function: Callable) -> Callable:
    options = [
        click.option("--poly", "--poly1", "poly", help='The exponent P, e.g. "z^3 + (0.5,-1)*z".'),
        click.option("--input", "input_path", type=click.Path(dir_okay=False), help="Curve-spec JSON file giving P."),
        click.option("--random-degree", type=int, help="Use a random monic P of this degree."),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for --random-degree."),
        click.option("--tol", type=float, default=DEFAULT_TOLERANCES.quadrature, envvar=TOLERANCE_ENV_VAR, show_default=True,
                     help=f"Absolute quadrature tolerance (environment: {TOLERANCE_ENV_VAR})."),
        click.option("--output", type=click.Path(dir_okay=False), help="Write the report here instead of standard output."),
        click.option("--plot", is_flag=True, help="Write an SVG of the descent sectors and contours next to the report."),
        quadrature_rule_resolver.get_option("--rule", default="gausskronrod", as_string=True),
        click.option("--workers", type=int, default=1, show_default=True, help="Threads used for period matrix rows."),
    ]
    for option in reversed(options):
        function = option(function)
    return function


@click.group()
@click.option("--verbose", is_flag=True, help="Log debugging details to standard error.")
def main(verbose: bool) -> None:
    """Exponential periods of genus-zero exp-algebraic curves"""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s", force=True)


@main.command(name="surface-info")
@_common_options
@click.pass_context
def surface_info(ctx: click.Context, **options: Any) -> None:
    """Ramification angles, H1 dimension and the standard cycle basis."""
    ctx.exit(run(RunConfig(Command.SURFACE_INFO, **options)))


@main.command()
@_common_options
@click.option("--maxpow", type=int, help="Integrate z^j e^P dz for j = 0..maxpow (default deg P - 1).")
@click.pass_context
def periods(ctx: click.Context, **options: Any) -> None:
    """Periods of z^j e^P dz over the standard basis."""
    ctx.exit(run(RunConfig(Command.PERIODS, **options)))


@main.command(name="reduce")
@_common_options
@click.option("--q", required=True, help="The polynomial factor Q of the form Q e^P dz.")
@click.pass_context
def reduce_command(ctx: click.Context, **options: Any) -> None:
    """Reduce Q e^P dz to its normal form and print the certificate."""
    ctx.exit(run(RunConfig(Command.REDUCE, **options)))


@main.command()
@_common_options
@click.pass_context
def recover(ctx: click.Context, **options: Any) -> None:
    """Build the period matrix and recover P' from its kernel."""
    ctx.exit(run(RunConfig(Command.RECOVER, **options)))


@main.command()
@_common_options
@click.option("--poly2", required=True, help="The second exponent.")
@click.pass_context
def verify(ctx: click.Context, **options: Any) -> None:
    """Decide whether two exponents define the same exp-algebraic curve."""
    ctx.exit(run(RunConfig(Command.VERIFY, **options)))


@main.command()
@click.option("--principal-part", required=True, help='The germ at 0 as a polynomial in 1/z, e.g. "z" for h = 1/z.')
@click.option("--omega-num", default="1", show_default=True, help="Numerator of the 1-form factor.")
@click.option("--omega-den", default="1", show_default=True, help="Denominator of the 1-form factor.")
@click.option("--multiplier", default="1", show_default=True, help="The polynomial multiplier.")
@click.option("--kmax", type=int, default=0, show_default=True)
@click.option("--trunc", type=int, default=30, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False))
@click.pass_context
def case2(ctx: click.Context, **options: Any) -> None:
    """Truncated residues at 0 of z^k * multiplier * e^h * omega."""
    ctx.exit(run(RunConfig(Command.CASE2, **options)))
