"""Arithmetic modes and scalar conversion.

Two modes are supported. ``exact`` stores every scalar as a reduced
:class:`fractions.Fraction` and compares exactly. ``float`` stores Python
floats and compares against zero with two tolerances: one for feasibility
tests and a (tighter) one for pivot eligibility.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ScalarModeError

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class Arithmetic:
    mode: str = EXACT
    eps_feas: float = 1e-8
    eps_piv: float = 1e-9

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ScalarModeError(f"unknown arithmetic mode {self.mode!r}")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def convert(self, value) -> Scalar:
        return parse_scalar(value, self.mode)

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    # Sign tests.  ``tol`` picks the tolerance in float mode.
    def _eps(self, tol: str) -> float:
        return self.eps_piv if tol == "piv" else self.eps_feas

    def is_zero(self, x, tol: str = "feas") -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self._eps(tol)

    def is_neg(self, x, tol: str = "feas") -> bool:
        if self.exact:
            return x < 0
        return x < -self._eps(tol)

    def is_pos(self, x, tol: str = "feas") -> bool:
        if self.exact:
            return x > 0
        return x > self._eps(tol)

    def eq(self, x, y, tol: str = "feas") -> bool:
        if self.exact:
            return x == y
        if math.isinf(x) or math.isinf(y):
            return x == y
        return abs(x - y) <= self._eps(tol) * max(1.0, abs(x), abs(y))

    def le(self, x, y, tol: str = "feas") -> bool:
        return x <= y or self.eq(x, y, tol)


EXACT_ARITH = Arithmetic(EXACT)
FLOAT_ARITH = Arithmetic(FLOAT)


def parse_scalar(value, mode: str = EXACT) -> Scalar:
    """Convert ``value`` (int, float, Fraction or "p/q" string) into ``mode``.

    Floats and decimal strings are rejected in exact mode; booleans are
    rejected everywhere.
    """
    if isinstance(value, bool):
        raise ScalarModeError(f"boolean is not a scalar: {value!r}")
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            match = _RATIONAL_RE.match(value)
            if not match:
                raise ScalarModeError(f"{value!r} is not an exact rational (expected 'p/q')")
            num, den = match.groups()
            if den is not None and int(den) == 0:
                raise ScalarModeError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den) if den else 1)
        if isinstance(value, float):
            raise ScalarModeError(f"float {value!r} not allowed in exact mode")
        # numpy integers and the like
        if hasattr(value, "__index__"):
            return Fraction(value.__index__())
        raise ScalarModeError(f"cannot read {value!r} as an exact scalar")
    if mode == FLOAT:
        if isinstance(value, str):
            match = _RATIONAL_RE.match(value)
            if match:
                num, den = match.groups()
                return int(num) / int(den) if den else float(int(num))
            try:
                return float(value)
            except ValueError:
                raise ScalarModeError(f"cannot read {value!r} as a float") from None
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ScalarModeError(f"cannot read {value!r} as a float") from None
    raise ScalarModeError(f"unknown arithmetic mode {mode!r}")


def format_scalar(value):
    """JSON-ready form: ints and "p/q" strings for rationals, numbers for floats."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float) and math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    if isinstance(value, int):
        return value
    return float(value)


def parse_endpoint(value, mode: str = EXACT):
    """Like :func:`parse_scalar` but accepts "-inf"/"+inf"."""
    if isinstance(value, str) and value.strip() in ("-inf", "+inf", "inf"):
        return -math.inf if value.strip() == "-inf" else math.inf
    return parse_scalar(value, mode)


def mode_of(value) -> str:
    return EXACT if isinstance(value, (Fraction, int)) else FLOAT
