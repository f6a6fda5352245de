"""
Machine readable reports. Every report is a dataclass that prints itself as JSON and parses back to an equal value.
Complex numbers are written as two element arrays [re, im].
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, ClassVar, Type, TypeVar

from .errors import InputError

R = TypeVar("R", bound="Report")


def complex_to_json(value: complex) -> list[float]:
    value = complex(value)
    return [value.real, value.imag]


def complex_from_json(value: Any) -> complex:
    """
    Reads [re, im] (or a plain real number) as a complex number.

    :raises InputError: for anything else.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(_is_number(v) for v in value):
        return complex(value[0], value[1])
    raise InputError(f"Expected a complex number [re, im], got {value!r}")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def encode(value: Any) -> Any:
    """Replaces complex numbers by [re, im] anywhere inside lists, tuples and dicts."""
    if isinstance(value, complex):
        return complex_to_json(value)
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return value


def decode_complex(value: Any) -> Any:
    """Inverse of encode for data known to hold complex numbers: every list of exactly two numbers becomes a complex number."""
    if isinstance(value, dict):
        return {k: decode_complex(v) for k, v in value.items()}
    if isinstance(value, list):
        if len(value) == 2 and all(_is_number(v) for v in value):
            return complex(value[0], value[1])
        return [decode_complex(v) for v in value]
    return value


@dataclass
class Report:
    """
    Base class of the reports. Subclasses list in COMPLEX_FIELDS the fields whose values contain complex numbers.
    """

    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset()

    def to_dict(self) -> dict[str, Any]:
        return encode(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls: Type[R], data: dict[str, Any]) -> R:
        names = {f.name for f in fields(cls)}
        missing = names - set(data)
        if missing:
            raise InputError(f"{cls.__name__} is missing the fields {sorted(missing)}")
        values = {name: decode_complex(data[name]) if name in cls.COMPLEX_FIELDS else data[name] for name in names}
        return cls(**values)

    @classmethod
    def from_json(cls: Type[R], text: str) -> R:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise InputError(error.msg, line=error.lineno, column=error.colno) from error
        return cls.from_dict(data)


@dataclass
class SurfaceInfoReport(Report):
    """
    :attr poly: (list[complex]): Coefficients of P, lowest power first.
    :attr degree: (int): deg P.
    :attr ramification_angles: (list[float]): Central angles in [0, 2 pi).
    :attr h1_dimension: (int): deg P - 1.
    :attr cycles: (list[dict]): The standard basis, as written by RelativeCycle.to_json.
    """

    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"poly"})

    poly: list[complex]
    degree: int
    ramification_angles: list[float]
    h1_dimension: int
    cycles: list[dict[str, Any]] = field(default_factory=list)


@dataclass
class PeriodsReport(Report):
    """
    :attr poly: (list[complex]): Coefficients of P.
    :attr maxpow: (int): Highest power z^j integrated.
    :attr tol: (float): Requested absolute tolerance.
    :attr rows: (list[list[dict]]): Per basis cycle, per power, the entries value, abs_error_estimate, truncation_radius, evaluations and converged.
    """

    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"poly", "rows"})

    poly: list[complex]
    maxpow: int
    tol: float
    rows: list[list[dict[str, Any]]]


@dataclass
class ReductionReport(Report):
    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"poly", "q", "coeffs", "r"})

    poly: list[complex]
    q: list[complex]
    coeffs: list[complex]
    r: list[complex]
    residual: float
    exact: bool


@dataclass
class RecoveryReport(Report):
    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"kernel", "recovered_Pprime", "matrix"})

    degree: int
    rank: int
    min_singular_ratio: float
    kernel: list[complex]
    recovered_Pprime: list[complex]
    residual: float
    matrix: list[list[complex]]


@dataclass
class VerificationReport(Report):
    """
    The outcome of comparing two curves. The top level fields describe the first curve, "second" the second one;
    "residuals" holds the kernel residuals, the kernel angle and the largest distinguisher class norm.
    """

    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"kernel", "recovered_Pprime", "second"})

    degree: int
    rank: int
    min_singular_ratio: float
    kernel: list[complex]
    recovered_Pprime: list[complex]
    verdict: str
    residuals: dict[str, float]
    second: dict[str, Any] = field(default_factory=dict)
    reason: str = ""


@dataclass
class Case2Report(Report):
    """
    :attr rows: (list[dict]): Entries k, residue and tail_estimate.
    """

    COMPLEX_FIELDS: ClassVar[frozenset[str]] = frozenset({"principal_part", "rows"})

    principal_part: list[complex]
    kmax: int
    trunc: int
    rows: list[dict[str, Any]]
