"""Bicoloured Dyck paths: closed-form series and a direct enumerator.

Steps are coloured red or blue; a multicoloured peak is an up-step followed
by a down-step of the other colour (marked by ``a``).  Three families:

* T2(a, u): no colour restriction.
* T1(a, u, y): steps leaving height 0 are red; ``y`` marks vertices at
  height 0, endpoints included.
* T(a, u, x): steps leaving height 0 or 1 are red; ``x`` marks vertices at
  height 1.

A "step from height h" is one that starts at height h.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import OracleScaleError
from .series import TruncatedSeries

ENUMERATION_LIMIT = 6
CONSTRAINTS = ("none", "red-from-0", "red-from-0-or-1")


def _as_series(value, order: int) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value.truncate(order)
    return TruncatedSeries.constant(Fraction(value), order)


def discriminant(a, u: TruncatedSeries) -> TruncatedSeries:
    """1 - 12u + 4u^2 - 4au + 4a^2u^2 - 8au^2 for a scalar or series ``a``."""
    a = _as_series(a, u.order)
    return 1 - 12 * u + 4 * u * u - 4 * a * u + 4 * a * a * u * u - 8 * a * u * u


def t2_series(a, n_max: int) -> TruncatedSeries:
    """(1 + 2u - 2au - sqrt(disc)) / (8u), the branch with T2(a, 0) = 1."""
    u = TruncatedSeries.variable(n_max + 1)
    a = _as_series(a, n_max + 1)
    num = 1 + 2 * u - 2 * a * u - discriminant(a, u).sqrt()
    return num.shift(-1) / 8


def t1_series(a, y, n_max: int, u: TruncatedSeries | None = None) -> TruncatedSeries:
    """4y / (4 + 2yu - 2yau - y + y sqrt(disc))."""
    u = TruncatedSeries.variable(n_max) if u is None else u
    a, y = _as_series(a, u.order), _as_series(y, u.order)
    root = discriminant(a, u).sqrt()
    return 4 * y / (4 + 2 * y * u - 2 * y * a * u - y + y * root)


def t_series(a, x, n_max: int, u: TruncatedSeries | None = None) -> TruncatedSeries:
    """(4 + 2xu - 2xau - x + x sqrt(disc)) / (4 - 2xu - 2xau - x + x sqrt(disc)).

    ``a``, ``x`` and ``u`` may be series in another variable, in which case
    ``u`` must have zero constant term.
    """
    u = TruncatedSeries.variable(n_max) if u is None else u
    a, x = _as_series(a, u.order), _as_series(x, u.order)
    root = discriminant(a, u).sqrt()
    common = x * root - x - 2 * x * a * u
    return (4 + 2 * x * u + common) / (4 - 2 * x * u + common)


def enumerate_bicoloured(half_len: int, constraint: str = "none") -> dict[tuple[int, int], int]:
    """Paths of the given half-length: (multicoloured peaks, marked vertices) -> count.

    Marked vertices are those at height 0 for ``red-from-0`` and at height 1
    for ``red-from-0-or-1``; with no constraint nothing is marked.
    """
    if half_len > ENUMERATION_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    red_below = {"none": 0, "red-from-0": 1, "red-from-0-or-1": 2}[constraint]
    marked = {"none": None, "red-from-0": 0, "red-from-0-or-1": 1}[constraint]
    out: dict[tuple[int, int], int] = {}
    for shape in _dyck_shapes(half_len):
        for colours in itertools.product("rb", repeat=2 * half_len):
            heights = [0]
            ok = True
            for d, c in zip(shape, colours):
                if heights[-1] < red_below and c != "r":
                    ok = False
                    break
                heights.append(heights[-1] + d)
            if not ok:
                continue
            peaks = sum(1 for i in range(len(shape) - 1)
                        if shape[i] == 1 and shape[i + 1] == -1 and colours[i] != colours[i + 1])
            hits = 0 if marked is None else heights.count(marked)
            out[(peaks, hits)] = out.get((peaks, hits), 0) + 1
    return dict(sorted(out.items()))


def _dyck_shapes(n: int):
    def rec(prefix, height, ups):
        if len(prefix) == 2 * n:
            yield tuple(prefix)
            return
        if ups < n:
            yield from rec(prefix + [1], height + 1, ups + 1)
        if height > 0:
            yield from rec(prefix + [-1], height - 1, ups)
    yield from rec([], 0, 0)


def evaluate_table(table: dict[tuple[int, int], int], a, z) -> Fraction:
    """Sum of count * a^peaks * z^marked."""
    a, z = Fraction(a), Fraction(z)
    return sum((c * a ** p * z ** h for (p, h), c in table.items()), Fraction(0))
