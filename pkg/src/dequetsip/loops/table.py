"""Corner-weighted quarter-plane loops: tables, Q(a, u) and its specializations.

s(n, k, x, y) counts N/E/S/W walks of n steps from the origin to (x, y)
that never leave x, y >= 0 and contain k corners, a corner being a factor
NW (N then W) or ES (E then S).  Q(a, u) = sum s(2n, k, 0, 0) a^k u^n.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

import numpy as np

from .._modular import crt_arrays, primes_below, primes_for_bits
from ..errors import OracleScaleError, ResourceLimitError
from ..series import CornerPolynomial, TruncatedSeries
from .engine import iter_layers, layer_entries, origin_values

BRUTE_FORCE_LIMIT = 12

Progress = Callable[[int, int], None] | None


@dataclass(frozen=True)
class LoopTable:
    """Every nonzero s(n, k, x, y) for n <= max_steps (or only the last layers kept)."""

    max_steps: int
    layers: dict = field(repr=False)

    def __getitem__(self, key: tuple[int, int, int, int]) -> int:
        n, k, x, y = key
        if n not in self.layers:
            if 0 <= n <= self.max_steps:
                raise KeyError(f"layer {n} was not retained")
            return 0
        return self.layers[n].get((k, x, y), 0)

    def entries(self) -> Iterable[tuple[tuple[int, int, int, int], int]]:
        for n in sorted(self.layers):
            for (k, x, y), v in sorted(self.layers[n].items()):
                yield (n, k, x, y), v

    def loops(self, n: int) -> CornerPolynomial:
        """k-polynomial of loops with n steps."""
        layer = self.layers.get(n, {})
        top = max((k for (k, x, y) in layer if x == 0 and y == 0), default=-1)
        return CornerPolynomial(layer.get((k, 0, 0), 0) for k in range(top + 1))


def build_loop_table(n_max: int, *, keep: str = "all", threads: int = 1,
                     progress: Progress = None) -> LoopTable:
    """Exact table by the layer recurrence; ``keep='last'`` retains only layer n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    layers = {}
    for m, layer in iter_layers(n_max, threads=threads):
        try:
            if keep == "all" or m == n_max:
                layers[m] = {(k, x, y): v for k, x, y, v in layer_entries(layer)}
        except MemoryError:
            raise ResourceLimitError(f"out of memory storing layer {m}") from None
        if progress:
            progress(m, n_max)
    return LoopTable(n_max, layers)


_MOVES = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
_CORNERS = {("N", "W"), ("E", "S")}


def brute_force_loops(n: int) -> LoopTable:
    """Enumerate every confined walk of each length up to ``n`` one by one."""
    if n > BRUTE_FORCE_LIMIT:
        raise OracleScaleError("oracle scale exceeded")
    layers = {m: {} for m in range(n + 1)}

    def walk(m: int, x: int, y: int, last: str | None, corners: int) -> None:
        cell = layers[m]
        cell[(corners, x, y)] = cell.get((corners, x, y), 0) + 1
        if m == n:
            return
        for step, (dx, dy) in _MOVES.items():
            nx, ny = x + dx, y + dy
            if nx >= 0 and ny >= 0:
                walk(m + 1, nx, ny, step, corners + ((last, step) in _CORNERS))

    walk(0, 0, 0, None, 0)
    return LoopTable(n, layers)


@dataclass(frozen=True)
class QSeries:
    """Coefficients P_n(a) of u^n in Q(a, u), n = 0..order.

    When ``graded`` is set, P_n is only known to degree order - n in a,
    which is all that a substitution a, u -> O(t) can see at t^order.
    """

    polys: tuple[CornerPolynomial, ...]
    graded: bool = False

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def to_json(self) -> str:
        obj = {"order": self.order, "polys": [[str(c) for c in p.coeffs] for p in self.polys]}
        if self.graded:
            obj["graded"] = True
        return json.dumps(obj) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        obj = json.loads(text)
        polys = tuple(CornerPolynomial(int(c) for c in p) for p in obj["polys"])
        if len(polys) != obj["order"] + 1:
            raise ValueError("polys length does not match order")
        return cls(polys, bool(obj.get("graded", False)))

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError(f"Q known through {self.order}, {order} requested")
        polys = self.polys[:order + 1]
        if self.graded:
            polys = tuple(CornerPolynomial(p.coeffs[:order - n + 1]) for n, p in enumerate(polys))
        return QSeries(polys, self.graded)

    def at(self, a) -> TruncatedSeries:
        """Q(a, u) for rational a; needs the full polynomials."""
        if self.graded:
            raise ValueError("a graded Q cannot be specialized at a fixed a")
        return TruncatedSeries([p(Fraction(a)) for p in self.polys])


def _loop_residues(n_max: int, p: int, graded: bool, threads: int) -> list[np.ndarray]:
    out = []
    for m, layer in iter_layers(2 * n_max, horizon=2 * n_max, graded=graded, modulus=p,
                                threads=threads):
        if m % 2 == 0:
            n = m // 2
            vals = origin_values(layer)
            top = n if not graded else min(n, n_max - n)
            out.append(np.array([vals.get(k, 0) for k in range(top + 1)], dtype=np.int64))
    return out


def q_series(n_max: int, *, graded: bool = False, threads: int = 1,
             progress: Progress = None) -> QSeries:
    """Q(a, u) through u^n_max by the modular engine and Chinese remaindering.

    Loop counts with 2n steps are at most 16^n, so 4 n_max bits bound every
    coefficient; one spare prime is run and must agree.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    primes = primes_for_bits(4 * n_max + 1, extra=1)
    per_prime = []
    for i, p in enumerate(primes):
        per_prime.append(_loop_residues(n_max, p, graded, threads))
        if progress:
            progress(i + 1, len(primes))
    polys = []
    for n in range(n_max + 1):
        vals = crt_arrays([r[n] for r in per_prime[:-1]], primes[:-1])
        check = np.array([int(v) % primes[-1] for v in vals], dtype=np.int64)
        if not np.array_equal(check, per_prime[-1][n]):
            raise ArithmeticError(f"residue check failed at u^{n}")
        polys.append(CornerPolynomial(int(v) for v in vals))
    return QSeries(tuple(polys), graded)


def _scalar_prime_bits(scale: int, corner: int) -> int:
    # one layer forms scale * (4 residues) + corner * (reduced residue)
    headroom = (4 * abs(scale) + abs(corner) + 1).bit_length()
    return 63 - headroom


def q_at(a, n_max: int, q: QSeries | None = None, *, threads: int = 1,
         progress: Progress = None) -> TruncatedSeries:
    """Q(a, u) as a series in u for a rational ``a``.

    With ``q`` the stored polynomials are evaluated; otherwise the corner
    weight is folded into a scalar modular run of the loop recurrence.
    """
    a = Fraction(a)
    if q is not None:
        return q.truncate(n_max).at(a)
    r, s = a.numerator, a.denominator
    scalar = (s, s * (r - s))
    # |s^(2n) Q_n(a)| <= (s^2 max(1, |a|) 16)^n
    bits = n_max * ((s * s * max(1, abs(a)) * 16).__ceil__().bit_length()) + 2
    pbits = _scalar_prime_bits(*scalar)
    need = bits // (pbits - 1) + 2
    primes = primes_below(pbits, need + 1)
    per_prime = []
    for i, p in enumerate(primes):
        vals = []
        for m, layer in iter_layers(2 * n_max, horizon=2 * n_max, modulus=p, scalar=scalar,
                                    threads=threads):
            if m % 2 == 0:
                vals.append(origin_values(layer).get(0, 0))
        per_prime.append(np.array(vals, dtype=np.int64))
        if progress:
            progress(i + 1, len(primes))
    exact = crt_arrays(per_prime[:-1], primes[:-1], signed=True)
    if any(int(v) % primes[-1] != int(c) for v, c in zip(exact, per_prime[-1])):
        raise ArithmeticError("residue check failed for q_at")
    return TruncatedSeries([Fraction(int(v), s ** (2 * n)) for n, v in enumerate(exact)])


def q1_series(a, x, n_max: int, q: QSeries | None = None, **kw) -> TruncatedSeries:
    """Q1(a, u, x) = 2Q / (2Q - xQ + x): loops marked by x at each origin return."""
    Q = q_at(a, n_max, q, **kw)
    x = Fraction(x)
    den = 2 * Q - x * Q + x
    if den[0] == 0:
        raise ZeroDivisionError("denominator series has zero constant term")
    return (2 * Q) / den


def u_series(a, n_max: int, q: QSeries | None = None, **kw) -> TruncatedSeries:
    """U = 1 - 1/Q, loops that return to the origin only at their end."""
    return 1 - 1 / q_at(a, n_max, q, **kw)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    checked_through: int
    first_violation: tuple[int, int, int] | None  # (n, power of a+1, coefficient)


def check_a_plus_one_positivity(q: QSeries) -> PositivityReport:
    """Expand every P_n(a) in powers of a + 1 and look for a negative coefficient."""
    if q.graded:
        raise ValueError("positivity needs the full polynomials")
    for n, poly in enumerate(q.polys):
        for j, c in enumerate(poly.shifted_basis(1)):
            if c < 0:
                return PositivityReport(False, q.order, (n, j, c))
    return PositivityReport(True, q.order, None)


def stderr_progress(label: str) -> Callable[[int, int], None]:
    def report(done: int, total: int) -> None:
        print(f"{label}: {done}/{total}", file=sys.stderr, flush=True)
    return report
