"""Exact truncated power series, corner polynomials and Padé approximants.

Coefficients are rationals in lowest terms.  Products run through FLINT's
``fmpq_poly.mul_low``; everything else (inversion, square roots,
composition, Padé systems) is built on top of it here.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

import flint

Number = int | Fraction


class SeriesError(ArithmeticError):
    pass


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class TruncatedSeries:
    """A power series known through ``t**order``; immutable.

    Binary operations truncate to the smaller order of their operands.
    Plain numbers are treated as exact (infinite-order) series.
    """

    __slots__ = ("_poly", "_order")

    def __init__(self, coeffs: Iterable[Number | str], order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = cs[:order + 1]
        self._poly = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in cs])
        self._order = order

    @classmethod
    def _wrap(cls, poly, order: int) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj._poly = poly if poly.length() <= order + 1 else poly.truncate(order + 1)
        obj._order = order
        return obj

    @classmethod
    def from_poly(cls, poly, order: int) -> "TruncatedSeries":
        """Wrap an ``fmpq_poly`` or ``fmpz_poly``, truncating to ``order``."""
        if isinstance(poly, flint.fmpz_poly):
            poly = flint.fmpq_poly(poly)
        return cls._wrap(poly, order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        return cls._wrap(flint.fmpq_poly([0, 1]), order)

    @classmethod
    def constant(cls, value: Number, order: int) -> "TruncatedSeries":
        return cls._wrap(flint.fmpq_poly([_fmpq(value)]), order)

    @property
    def order(self) -> int:
        return self._order

    @property
    def poly(self) -> flint.fmpq_poly:
        return self._poly

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        raw = [_frac(c) for c in self._poly.coeffs()]
        return tuple(raw + [Fraction(0)] * (self._order + 1 - len(raw)))

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i <= self._order:
            raise IndexError(f"coefficient {i} outside known range 0..{self._order}")
        return _frac(self._poly[i])

    def __len__(self) -> int:
        return self._order + 1

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self._order >= 8 else ""
        return f"TruncatedSeries([{shown}{more}], order={self._order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._order == other._order and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._order, tuple(self.coeffs)))

    def _coerce(self, other) -> tuple[flint.fmpq_poly, int]:
        if isinstance(other, TruncatedSeries):
            return other._poly, other._order
        if isinstance(other, (int, Fraction)):
            return flint.fmpq_poly([_fmpq(other)]), self._order
        return None, -1

    def __add__(self, other):
        poly, order = self._coerce(other)
        if poly is None:
            return NotImplemented
        n = min(self._order, order)
        return TruncatedSeries._wrap(self._poly + poly, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._wrap(-self._poly, self._order)

    def __sub__(self, other):
        poly, order = self._coerce(other)
        if poly is None:
            return NotImplemented
        return TruncatedSeries._wrap(self._poly - poly, min(self._order, order))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self._order, other._order)
            return TruncatedSeries._wrap(self._poly.mul_low(other._poly, n + 1), n)
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries._wrap(self._poly * _fmpq(other), self._order)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return TruncatedSeries._wrap(self._poly / _fmpq(other), self._order)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        return TruncatedSeries._wrap(self._poly.pow_trunc(e, self._order + 1)
                                     if e else flint.fmpq_poly([1]), self._order)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self._order:
            raise SeriesError(f"cannot extend a series known through {self._order} to {order}")
        return TruncatedSeries._wrap(self._poly, order)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` if all known ones vanish."""
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                return i
        return None

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``t**k``; negative ``k`` divides and needs that many zero terms."""
        if k >= 0:
            return TruncatedSeries._wrap(self._poly.left_shift(k), self._order + k)
        v = self.valuation()
        if v is not None and v < -k:
            raise SeriesError("division by t leaves a pole")
        return TruncatedSeries._wrap(self._poly.right_shift(-k), self._order + k)

    def derivative(self) -> "TruncatedSeries":
        if self._order == 0:
            return TruncatedSeries._wrap(flint.fmpq_poly([]), 0)
        return TruncatedSeries._wrap(self._poly.derivative(), self._order - 1)

    def inverse(self) -> "TruncatedSeries":
        c0 = self._poly[0]
        if c0 == 0:
            raise SeriesError("non-invertible series")
        n = self._order + 1
        g = flint.fmpq_poly([1 / c0])
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            e = self._poly.mul_low(g, prec)
            g = g.mul_low(2 - e, prec)
        return TruncatedSeries._wrap(g, self._order)

    def sqrt(self) -> "TruncatedSeries":
        """Square root with positive constant term."""
        c0 = _frac(self._poly[0])
        root = _rational_sqrt(c0)
        if root is None or root == 0:
            raise SeriesError(f"constant term {c0} is not a nonzero rational square")
        f = self._poly / _fmpq(c0)
        n = self._order + 1
        # y -> 1/sqrt(f) by y <- y (3 - f y^2) / 2
        y = flint.fmpq_poly([1])
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            e = f.mul_low(y.mul_low(y, prec), prec)
            y = y.mul_low(3 - e, prec) / 2
        return TruncatedSeries._wrap(f.mul_low(y, n) * _fmpq(root), self._order)

    def is_integral(self) -> bool:
        return self._poly.denom() == 1

    def __call__(self, x):
        """Evaluate the known polynomial part at ``x`` (exact for rationals)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    from math import isqrt
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


class CornerPolynomial:
    """Integer polynomial in the corner weight ``a``; trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, a):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, CornerPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "CornerPolynomial") -> "CornerPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return CornerPolynomial(x + y for x, y in zip(a, b))

    def __repr__(self) -> str:
        return f"CornerPolynomial({list(self.coeffs)})"

    def shifted_basis(self, c: int = 1) -> tuple[int, ...]:
        """Coefficients b_j with P(a) = sum b_j (a + c)**j."""
        if not self.coeffs:
            return ()
        p = flint.fmpz_poly(list(self.coeffs))
        return tuple(int(x) for x in p(flint.fmpz_poly([-c, 1])).coeffs())


def series_compose(outer: Sequence[CornerPolynomial], arg_a: TruncatedSeries,
                   arg_u: TruncatedSeries, order: int | None = None) -> TruncatedSeries:
    """Evaluate sum_n arg_u**n * outer[n](arg_a) through ``order`` by Horner's scheme.

    ``outer`` is taken as exact: entries past its end are zero.  ``arg_u``
    needs positive valuation.  When ``arg_a`` has positive valuation too,
    each ``outer[n]`` is only expanded to the degree that can still reach
    ``order``.
    """
    n_max = min(arg_a.order, arg_u.order) if order is None else order
    if n_max > min(arg_a.order, arg_u.order):
        raise SeriesError("arguments are not known to the requested order")
    if arg_u.poly[0] != 0:
        raise SeriesError("composition requires positive valuation")
    a_small = arg_a.poly[0] == 0
    A = arg_a.poly.truncate(n_max + 1)
    U = arg_u.poly.truncate(n_max + 1)
    acc = flint.fmpq_poly([])
    for n in range(min(len(outer) - 1, n_max), -1, -1):
        prec = n_max - n + 1  # u**n already supplies n powers of t
        cs = outer[n].coeffs[:prec] if a_small else outer[n].coeffs
        inner = flint.fmpq_poly([])
        for c in reversed(cs):
            inner = inner.mul_low(A, prec) + c
        acc = acc.mul_low(U, n_max + 1) + inner
    return TruncatedSeries._wrap(acc, n_max)


class PadeApproximant:
    """numerator / denominator with denominator(0) = 1."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Sequence[Fraction], denominator: Sequence[Fraction]):
        self.numerator = tuple(Fraction(c) for c in numerator)
        self.denominator = tuple(Fraction(c) for c in denominator)
        if not self.denominator or self.denominator[0] != 1:
            raise ValueError("denominator constant term must be 1")

    def series(self, order: int) -> TruncatedSeries:
        num = TruncatedSeries(self.numerator + (0,) * max(0, order + 1 - len(self.numerator)), order)
        den = TruncatedSeries(self.denominator + (0,) * max(0, order + 1 - len(self.denominator)), order)
        return num / den

    def __call__(self, x):
        num = 0
        for c in reversed(self.numerator):
            num = num * x + c
        den = 0
        for c in reversed(self.denominator):
            den = den * x + c
        return num / den


def pade_fit(s: TruncatedSeries, L: int, M: int) -> PadeApproximant:
    """[L/M] Padé approximant by an exact solve of the denominator system."""
    if s.order < L + M:
        raise SeriesError(f"[{L}/{M}] needs order {L + M}, series has {s.order}")
    c = s.coeffs

    def coef(i: int) -> Fraction:
        return c[i] if i >= 0 else Fraction(0)

    b = [Fraction(1)]
    if M:
        mat = flint.fmpq_mat(M, M, [_fmpq(coef(L + i - j)) for i in range(1, M + 1)
                                    for j in range(1, M + 1)])
        rhs = flint.fmpq_mat(M, 1, [_fmpq(-coef(L + i)) for i in range(1, M + 1)])
        try:
            sol = mat.solve(rhs)
        except ZeroDivisionError:
            raise SeriesError("degenerate Padé block") from None
        b += [_frac(sol[j, 0]) for j in range(M)]
    a = [sum((b[j] * coef(i - j) for j in range(min(i, M) + 1)), Fraction(0)) for i in range(L + 1)]
    return PadeApproximant(a, b)


_NUMBER = re.compile(r"-?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` exactly; anything else is rejected."""
    if not isinstance(text, str) or not _NUMBER.fullmatch(text):
        raise ValueError(f"not an exact rational: {text!r}")
    value = Fraction(text)
    return value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
