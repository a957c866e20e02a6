"""Extended-precision float sequences built from exact coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

DEFAULT_PRECISION = 50


def to_mpf(x, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """Correctly rounded value of an exact rational (or float) at ``precision`` digits."""
    with mpmath.workdps(precision):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        if hasattr(x, "p") and hasattr(x, "q"):  # flint.fmpq
            return mpmath.mpf(int(x.p)) / int(x.q)
        return mpmath.mpf(x)


@dataclass(frozen=True)
class FloatSeq:
    """Values indexed from ``start``; entries listed in ``flagged`` were skipped (None)."""

    values: tuple
    source: str = ""
    precision: int = DEFAULT_PRECISION
    start: int = 0
    flagged: tuple[int, ...] = field(default=())

    @classmethod
    def from_exact(cls, coeffs: Iterable, source: str = "", precision: int = DEFAULT_PRECISION) -> "FloatSeq":
        return cls(tuple(to_mpf(c, precision) for c in coeffs), source, precision)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        """Entry for index n (not position)."""
        i = n - self.start
        if i < 0 or i >= len(self.values):
            raise IndexError(n)
        return self.values[i]

    @property
    def indices(self) -> range:
        return range(self.start, self.start + len(self.values))

    def items(self) -> list[tuple[int, mpmath.mpf]]:
        return [(n, v) for n, v in zip(self.indices, self.values) if v is not None]

    def last(self):
        for v in reversed(self.values):
            if v is not None:
                return v
        raise ValueError("empty sequence")


def as_floatseq(data, source: str = "", precision: int = DEFAULT_PRECISION) -> FloatSeq:
    if isinstance(data, FloatSeq):
        return data
    if hasattr(data, "coeffs") and not isinstance(data, Sequence):
        data = data.coeffs
    return FloatSeq.from_exact(data, source, precision)
