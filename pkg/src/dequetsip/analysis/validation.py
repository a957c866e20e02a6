"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from ..series import TruncatedSeries, parse_rational


def check_series(X, *, min_terms: int = 1, integral: bool = False, name: str = "series") -> list[Fraction]:
    """Exact coefficients from a TruncatedSeries, a sequence of ints/Fractions/strings."""
    if isinstance(X, TruncatedSeries):
        coeffs = list(X.coeffs)
    elif isinstance(X, (str, bytes)) or not isinstance(X, Sequence) and not hasattr(X, "__iter__"):
        raise TypeError(f"{name}: expected a sequence of exact coefficients, got {type(X).__name__}")
    else:
        coeffs = []
        for i, c in enumerate(X):
            if isinstance(c, float) or isinstance(c, mpmath.mpf):
                raise TypeError(f"{name}[{i}]: floating value {c!r}; exact coefficients are required")
            try:
                coeffs.append(parse_rational(c) if isinstance(c, str) else Fraction(c))
            except (TypeError, ValueError):
                raise TypeError(f"{name}[{i}]: not an exact rational: {c!r}") from None
    if len(coeffs) < min_terms:
        raise ValueError(f"{name}: at least {min_terms} terms needed, got {len(coeffs)}")
    if integral:
        for i, c in enumerate(coeffs):
            if c.denominator != 1:
                raise ValueError(f"{name}[{i}]: expected an integer, got {c}")
    return coeffs


def check_float_series(X, *, min_terms: int = 1, name: str = "series") -> list:
    """Coefficients as mpf (exact values are rounded at the current precision)."""
    if isinstance(X, TruncatedSeries):
        X = X.coeffs
    out = []
    for i, c in enumerate(X):
        if isinstance(c, Fraction):
            out.append(mpmath.mpf(c.numerator) / c.denominator)
        else:
            try:
                out.append(mpmath.mpf(c))
            except (TypeError, ValueError):
                raise TypeError(f"{name}[{i}]: not a number: {c!r}") from None
    if len(out) < min_terms:
        raise ValueError(f"{name}: at least {min_terms} terms needed, got {len(out)}")
    return out


def check_degrees(degrees, M: int) -> tuple[int, ...]:
    degs = tuple(int(d) for d in degrees)
    if len(degs) not in (M + 1, M + 2):
        raise ValueError(f"order {M} needs {M + 1} or {M + 2} degrees, got {len(degs)}")
    if any(d < 0 for d in degs[:M + 1]) or (len(degs) == M + 2 and degs[-1] < -1):
        raise ValueError(f"degrees must be nonnegative (the inhomogeneous one may be -1): {degs}")
    return degs


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_fraction_open(value, lo: float, hi: float, name: str) -> float:
    v = float(value)
    if not lo < v <= hi:
        raise ValueError(f"{name} must lie in ({lo}, {hi}], got {value!r}")
    return v
