"""From weighted loops to the permutation generating functions.

P(t) (two stacks in parallel) is the series root of

    Q(1/P - 1, t P^2 / (1 - 2P)^2) = 2P - 1,         P(0) = 1,

and D(t) (deques) follows from P through a quadratic.  The checks at the
bottom reassemble both series from independent pieces (the Dyck closed
form, the enumerated unbreakable words) and compare coefficient by
coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import cache, dyck
from .errors import VerificationError
from .loops import QSeries, q1_series, q_at, q_series
from .series import CornerPolynomial, SeriesError, TruncatedSeries, series_compose

VARIANTS = ("corS", "F-asprinted", "F-plus")


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    order: int
    first_failure: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _compare(lhs: TruncatedSeries, rhs: TruncatedSeries, what: str) -> CheckResult:
    n = min(lhs.order, rhs.order)
    a, b = lhs.coeffs, rhs.coeffs
    for i in range(n + 1):
        if a[i] != b[i]:
            return CheckResult(False, n, i, f"{what}: coefficient {i} differs ({a[i]} vs {b[i]})")
    return CheckResult(True, n, None, what)


def _corner_derivative(p: CornerPolynomial) -> CornerPolynomial:
    return CornerPolynomial(k * c for k, c in enumerate(p.coeffs) if k)


def _cors_arguments(P: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    t = TruncatedSeries.variable(P.order)
    A = 1 / P - 1
    U = t * P * P / ((1 - 2 * P) ** 2)
    return A, U


def cors_defect(q: QSeries, P: TruncatedSeries) -> TruncatedSeries:
    """Q(1/P - 1, tP^2/(1-2P)^2) - (2P - 1)."""
    A, U = _cors_arguments(P)
    return series_compose(q.polys, A, U, P.order) - (2 * P - 1)


def _layer_solve(defect: Callable[[TruncatedSeries], TruncatedSeries], start: Fraction,
                 order: int, integral: bool = False) -> TruncatedSeries:
    """Fix one coefficient per pass from the t^n coefficient of the defect.

    For n >= 1 the t^n coefficient of defect(x + c t^n) is linear in c with
    slope d(defect)/dx at t = 0, the same at every n, so it is measured once.
    """
    coeffs = [Fraction(start)]
    if order == 0:
        return TruncatedSeries(coeffs)
    base = defect(TruncatedSeries(coeffs + [0], 1))[1]
    slope = defect(TruncatedSeries(coeffs + [1], 1))[1] - base
    if slope == 0:
        raise SeriesError("solver degeneracy")
    for n in range(1, order + 1):
        d = defect(TruncatedSeries(coeffs + [0], n))[n]
        c = -d / slope
        if integral and c.denominator != 1:
            raise VerificationError(f"non-integer coefficient {c} at t^{n}", n)
        coeffs.append(c)
    return TruncatedSeries(coeffs)


def _check_zero_constant(defect, start) -> None:
    c0 = defect(TruncatedSeries([start], 0))[0]
    if c0 != 0:
        raise SeriesError(f"no series root: the defect has constant term {c0} at the required start value")


def solve_P(q: QSeries, order: int, method: str = "newton") -> TruncatedSeries:
    """The series P with P(0) = 1; ``method`` is ``"layer"`` or ``"newton"``."""
    if q.order < order:
        raise ValueError(f"Q known through u^{q.order}, order {order} requested")
    qq = q.truncate(order)
    _check_zero_constant(lambda P: cors_defect(qq, P), 1)
    if method == "layer":
        P = _layer_solve(lambda P: cors_defect(qq, P), Fraction(1), order)
    elif method == "newton":
        P = _newton_P(qq, order)
    else:
        raise ValueError(f"unknown method {method!r}")
    assert_integral(P, "P")
    return P


def _newton_P(q: QSeries, order: int) -> TruncatedSeries:
    """Newton iteration with doubling precision.

    F(P) = Q(A, U) - 2P + 1 with A = 1/P - 1, U = tP^2/(1-2P)^2, and
    F'(P) = Q_a(A, U) (-1/P^2) + Q_u(A, U) 2tP/(1-2P)^3 - 2.
    """
    dq_a = [_corner_derivative(p) for p in q.polys]
    dq_u = [CornerPolynomial(n * c for c in q.polys[n].coeffs) for n in range(1, len(q.polys))]
    P = TruncatedSeries([1], 0)
    known = 1
    while known <= order:
        prec = min(2 * known, order + 1) - 1
        Pn = TruncatedSeries(P.coeffs + (0,) * (prec - P.order), prec)
        F = cors_defect(q, Pn)
        half = known - 1
        Ph = Pn.truncate(half)
        A, U = _cors_arguments(Ph)
        t = TruncatedSeries.variable(half)
        one_minus = 1 - 2 * Ph
        dF = (series_compose(dq_a, A, U, half) * (-1 / (Ph * Ph))
              + series_compose(dq_u, A, U, half) * (2 * t * Ph / one_minus ** 3) - 2)
        # F vanishes through t^(known-1), so F/F' needs F' only through t^(prec-known)
        correction = F.shift(-known) / _pad(dF, prec - known)
        P = Pn - correction.shift(known)
        known = prec + 1
    return P.truncate(order)


def _pad(s: TruncatedSeries, order: int) -> TruncatedSeries:
    """Reinterpret as a series known through ``order`` (only the low terms are used)."""
    if s.order >= order:
        return s.truncate(order)
    return TruncatedSeries(s.coeffs + (0,) * (order - s.order), order)


def assert_integral(s: TruncatedSeries, name: str) -> None:
    for i, c in enumerate(s.coeffs):
        if c.denominator != 1:
            raise VerificationError(f"{name} has the non-integer coefficient {c} at t^{i}", i)


def derive_D(P: TruncatedSeries) -> TruncatedSeries:
    """2D = 2 + t + 2Pt - 2Pt^2 - t sqrt(1 - 4P + 4P^2 - 8P^2 t + 4P^2 t^2 - 4Pt)."""
    if P[0] != 1:
        raise ValueError("P(0) must be 1")
    t = TruncatedSeries.variable(P.order)
    P2 = P * P
    radicand = 1 - 4 * P + 4 * P2 - 8 * P2 * t + 4 * P2 * t * t - 4 * P * t
    D = (2 + t + 2 * P * t - 2 * P * t * t - t * radicand.sqrt()) / 2
    assert_integral(D, "D")
    return D


def solve_F(q: QSeries, order: int, variant: str) -> TruncatedSeries:
    """The p-form of the relation, P = 1/(1 - p), p(0) = 0; returns P.

    ``F-asprinted``: Q(-p, t/(1-p)^2) - 2p + 1.
    ``F-plus``:      Q(-p, t/(1+p)^2) - (1+p)/(1-p).
    """
    qq = q.truncate(order)
    if variant == "F-asprinted":
        def defect(p):
            t = TruncatedSeries.variable(p.order)
            return series_compose(qq.polys, -p, t / (1 - p) ** 2, p.order) - 2 * p + 1
    elif variant == "F-plus":
        def defect(p):
            t = TruncatedSeries.variable(p.order)
            return series_compose(qq.polys, -p, t / (1 + p) ** 2, p.order) - (1 + p) / (1 - p)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    _check_zero_constant(defect, 0)
    p = _layer_solve(defect, Fraction(0), order)
    return 1 / (1 - p)


@dataclass(frozen=True)
class GFBundle:
    P: TruncatedSeries
    D: TruncatedSeries
    p: TruncatedSeries
    order: int


def _cached_q(order: int, cache_dir, threads: int, progress) -> QSeries:
    if cache_dir is not None:
        for path in sorted(Path(cache_dir).glob("Q_graded_*.json")):
            try:
                n = int(path.stem.rsplit("_", 1)[1])
            except ValueError:
                continue
            if n >= order:
                return QSeries.from_json(path.read_text()).truncate(order)
    q = q_series(order, graded=True, threads=threads, progress=progress)
    if cache_dir is not None:
        path = Path(cache_dir) / f"Q_graded_{order}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(q.to_json())
    return q


def compute_bundle(order: int, *, cache_dir=None, method: str = "newton", threads: int = 1,
                   progress=None) -> GFBundle:
    """P, D and p through ``order``, reusing and refreshing the series cache."""
    P = cache.find_cached(cache_dir, "P", order)
    if P is None:
        q = _cached_q(order, cache_dir, threads, progress)
        P = solve_P(q, order, method)
        if cache_dir is not None:
            cache.write_series(cache.cached_path(cache_dir, "P", order), "P", P)
    D = cache.find_cached(cache_dir, "D", order)
    if D is None:
        D = derive_D(P)
        if cache_dir is not None:
            cache.write_series(cache.cached_path(cache_dir, "D", order), "D", D)
    return GFBundle(P, D, 1 - 1 / P, order)


def verify_SinR(P: TruncatedSeries, D: TruncatedSeries) -> CheckResult:
    """P * 2t(D - 1 - Dt) = (D - 1)(D - t - 1)."""
    n = min(P.order, D.order)
    P, D = P.truncate(n), D.truncate(n)
    t = TruncatedSeries.variable(n)
    return _compare(P * 2 * t * (D - 1 - D * t), (D - 1) * (D - t - 1), "SinR")


def verify_TRS(P: TruncatedSeries, D: TruncatedSeries) -> CheckResult:
    """T(1/P - 1, tP^2/(1-2P)^2, 2 - 1/P) = (2P - 1) D / (DP + P - D)."""
    n = min(P.order, D.order)
    P, D = P.truncate(n), D.truncate(n)
    A, U = _cors_arguments(P)
    lhs = dyck.t_series(A, 2 - 1 / P, n, u=U)
    rhs = (2 * P - 1) * D / (D * P + P - D)
    return _compare(lhs, rhs, "TRS")


def _compose_M(m_table, arg_a: TruncatedSeries, arg_u: TruncatedSeries,
               arg_x: TruncatedSeries, order: int) -> TruncatedSeries:
    total = TruncatedSeries.constant(0, order)
    upow = TruncatedSeries.constant(1, order)
    for m in range(1, order + 1):
        upow = upow * arg_u
        for (qq, r), c in m_table.get(m, {}).items():
            total = total + c * upow * arg_a ** qq * arg_x ** r
    return total


def verify_M_relation(m_table, P: TruncatedSeries, D: TruncatedSeries, order: int,
                      samples=((Fraction(1, 3), Fraction(2, 5)), (Fraction(-2), Fraction(7, 3)))) -> CheckResult:
    """D = M(1 - 1/P, tP^2, 1) D/P + 1, and T = M(1 + (a-1)/Q, uQ^2, xQ1/Q) T/Q + 1.

    The second identity is checked as a series in u at rational (a, x).
    """
    if order > max(m_table, default=0):
        raise ValueError(f"M enumerated through half-length {max(m_table, default=0)}, {order} requested")
    Pn, Dn = P.truncate(order), D.truncate(order)
    t = TruncatedSeries.variable(order)
    one = TruncatedSeries.constant(1, order)
    M = _compose_M(m_table, 1 - 1 / Pn, t * Pn * Pn, one, order)
    res = _compare(M * Dn / Pn + 1, Dn, "R")
    if not res:
        return res
    for a, x in samples:
        Q = q_at(a, order)
        Q1 = q1_series(a, x, order)
        u = TruncatedSeries.variable(order)
        T = dyck.t_series(a, x, order)
        Mv = _compose_M(m_table, 1 + (a - 1) / Q, u * Q * Q, Q1 * x / Q, order)
        res = _compare(Mv * T / Q + 1, T, f"M at a={a}, x={x}")
        if not res:
            return res
    return CheckResult(True, order, None, "R and M")


def p_from_D(D: TruncatedSeries) -> TruncatedSeries:
    """P = (D - 1)(D - t - 1) / (2t (D - 1 - tD)); both sides start at t^3, which cancels.

    The result is known through t^(order - 3).
    """
    t = TruncatedSeries.variable(D.order)
    num = ((D - 1) * (D - t - 1)).shift(-3)
    den = (2 * t * (D - 1 - t * D)).shift(-3)
    return num / den


def verify_RinS(P: TruncatedSeries) -> CheckResult:
    """P -> D by the square-root relation, then D -> P by the rational one."""
    back = p_from_D(derive_D(P))
    return _compare(back, P, "RinS round trip")


def verify_Q1_at_2(a, order: int, q: QSeries | None = None) -> CheckResult:
    """Q1(a, u, 2) = Q(a, u)."""
    return _compare(q1_series(a, 2, order, q), q_at(a, order, q), f"Q1 = Q at x=2, a={a}")


def verify_catalan(order: int, q: QSeries | None = None) -> CheckResult:
    """sum_k s(2n, k, 0, 0) = C_n C_{n+1}, read from Q(1, u)."""
    from .loops import catalan
    Q = q_at(1, order, q)
    target = TruncatedSeries([catalan(n) * catalan(n + 1) for n in range(order + 1)])
    return _compare(Q, target, "Catalan totals")


def verify_loop_oracle(steps: int) -> CheckResult:
    """Recurrence table against one-by-one enumeration, every state."""
    from .loops import brute_force_loops, build_loop_table
    fast, slow = build_loop_table(steps), brute_force_loops(steps)
    a, b = dict(fast.entries()), dict(slow.entries())
    for key in sorted(set(a) | set(b)):
        if a.get(key, 0) != b.get(key, 0):
            return CheckResult(False, steps, key[0], f"loop oracle: s{key} = {a.get(key, 0)} vs {b.get(key, 0)}")
    return CheckResult(True, steps, None, "loop oracle")
