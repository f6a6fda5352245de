"""
Text formats: polynomial literals such as "z^3 + (0.5,-1)*z - 2" and the curve-spec JSON document

    {"genus": 0, "punctures": [{"location": "inf" | [re, im], "principal_part": [[re, im], ...]}]}

where principal_part lists c_1..c_d of the germ sum_j c_j w^-j.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .algebra import INFINITY, Infinity, PolyC, PrincipalPart
from .curve import ExpCurveGZ, Puncture
from .errors import InputError
from .reports import complex_from_json, complex_to_json

_NUMBER = r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?"
_TERM = re.compile(
    rf"^(?P<coef>\(\s*[+-]?{_NUMBER}\s*,\s*[+-]?{_NUMBER}\s*\)|{_NUMBER})?"
    rf"\s*\*?\s*(?P<z>z(?:\s*\^\s*(?P<power>[0-9]+))?)?$"
)


def _split_terms(text: str) -> list[tuple[int, int, str]]:
    """Splits at top level signs. Returns (sign, column, term) triples."""
    terms: list[tuple[int, int, str]] = []
    depth, start, sign = 0, 0, 1
    for index, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise InputError("Unbalanced ')'", line=1, column=index + 1)
        elif char in "+-" and depth == 0:
            # exponent of a number literal such as 1e-3
            if index >= 2 and text[index - 1] in "eE" and text[index - 2] in "0123456789.":
                continue
            body = text[start:index]
            if body.strip():
                terms.append((sign, start + 1, body))
                sign = 1
            elif terms or start > 0:
                raise InputError(f"Unexpected '{char}'", line=1, column=index + 1)
            sign *= -1 if char == "-" else 1
            start = index + 1
    if depth != 0:
        raise InputError("Unbalanced '('", line=1, column=len(text))
    terms.append((sign, start + 1, text[start:]))
    return terms


def parse_poly(text: str) -> PolyC:
    """
    Parses a polynomial literal: a sum of terms "c*z^k", where c is a real number or "(re,im)",
    the "*" is optional and "z^1" may be written "z". "0" is the zero polynomial.

    :param text: (str): The literal.
    :returns: (PolyC): The polynomial.
    :raises InputError: with the column of the offending term.
    """
    if not text.strip():
        raise InputError("Empty polynomial literal", line=1, column=1)
    coeffs: dict[int, complex] = {}
    for sign, column, raw in _split_terms(text):
        term = raw.strip()
        match = _TERM.match(term)
        if not term or match is None or (match.group("coef") is None and match.group("z") is None):
            raise InputError(f"Cannot read the term {raw.strip()!r}", line=1, column=column)
        coef_text = match.group("coef")
        if coef_text is None:
            coefficient = 1 + 0j
        elif coef_text.startswith("("):
            re_text, im_text = coef_text[1:-1].split(",")
            coefficient = complex(float(re_text), float(im_text))
        else:
            coefficient = complex(float(coef_text))
        if match.group("z") is None:
            power = 0
        else:
            power = int(match.group("power") or 1)
        coeffs[power] = coeffs.get(power, 0j) + sign * coefficient
    top = max(coeffs)
    return PolyC(tuple(coeffs.get(k, 0j) for k in range(top + 1)))


def format_poly(poly: PolyC) -> str:
    """Writes a literal that parse_poly reads back to the same polynomial."""
    if poly.is_zero():
        return "0"
    terms = []
    for power, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        monomial = "" if power == 0 else ("*z" if power == 1 else f"*z^{power}")
        terms.append(f"({c.real!r},{c.imag!r}){monomial}")
    return " + ".join(terms)


def _location_from_json(value: Any) -> Any:
    if value == "inf":
        return INFINITY
    return complex_from_json(value)


def curve_from_dict(data: Any) -> ExpCurveGZ:
    """
    Builds a curve from a parsed curve-spec document.

    :raises InputError: for a missing field, a genus other than 0 or an invalid puncture list.
    """
    if not isinstance(data, dict):
        raise InputError("A curve spec is a JSON object")
    if data.get("genus", 0) != 0:
        raise InputError(f"Only genus 0 curves are supported, got genus {data.get('genus')}")
    punctures = data.get("punctures")
    if not isinstance(punctures, list) or not punctures:
        raise InputError("A curve spec needs a nonempty list of punctures")
    records = []
    for index, record in enumerate(punctures):
        try:
            location = _location_from_json(record["location"])
            coeffs = tuple(complex_from_json(c) for c in record["principal_part"])
        except (KeyError, TypeError) as error:
            raise InputError(f"Puncture {index} needs a location and a principal_part") from error
        if not any(coeffs):
            raise InputError(f"Puncture {index} has no pole")
        records.append(Puncture(location, PrincipalPart(coeffs)))
    locations = [r.location for r in records]
    if len(set(locations)) != len(locations):
        raise InputError("Puncture locations must be distinct")
    return ExpCurveGZ(tuple(records))


def parse_curve_spec(text: str) -> ExpCurveGZ:
    """Reads a curve-spec JSON document; syntax errors carry their line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise InputError(error.msg, line=error.lineno, column=error.colno) from error
    return curve_from_dict(data)


def curve_to_dict(curve: ExpCurveGZ) -> dict[str, Any]:
    return {
        "genus": 0,
        "punctures": [
            {
                "location": "inf" if isinstance(p.location, Infinity) else complex_to_json(p.location),
                "principal_part": [complex_to_json(c) for c in p.principal_part.neg_coeffs],
            }
            for p in curve.punctures
        ],
    }


def format_curve_spec(curve: ExpCurveGZ) -> str:
    return json.dumps(curve_to_dict(curve), indent=2)
