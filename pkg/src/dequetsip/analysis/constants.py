"""Critical amplitudes of P and D at t_c.

If t_c is the common radius of convergence, P(t_c) and D(t_c) follow in
closed form from t_c; P'(t_c) and the square-root amplitude D_1(t_c) are
read off Padé approximants evaluated at t = t_c.  Every series is first
rescaled to s = t/t_c so that the evaluation point is s = 1.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .floatseq import DEFAULT_PRECISION, to_mpf
from .pade import PadeEstimate, pade_estimate


@dataclass(frozen=True)
class Estimate:
    value: mpmath.mpf
    error: mpmath.mpf

    def __iter__(self):
        yield self.value
        yield self.error


@dataclass(frozen=True)
class AsymptoticConstants:
    t_c: Estimate
    P_at_tc: Estimate
    D_at_tc: Estimate
    Pprime_at_tc: Estimate
    D1_at_tc: Estimate
    k_D: Estimate
    Delta: Estimate | None = None
    kappa_d: Estimate | None = None
    kappa_p: Estimate | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def closed_form_P(t_c):
    """P(t_c) = 1 / (2 (1 - sqrt t_c)^2)."""
    return 1 / (2 * (1 - mpmath.sqrt(t_c)) ** 2)


def closed_form_D(t_c):
    """D(t_c) = (1 + t_c^(3/2)) / (1 - t_c)."""
    return (1 + t_c ** mpmath.mpf(1.5)) / (1 - t_c)


def consteqn_residual(P_c, t_c):
    """sqrt(2 P(t_c)) - 1 - sqrt(2 t_c P(t_c)); zero at the critical point."""
    return mpmath.sqrt(2 * P_c) - 1 - mpmath.sqrt(2 * t_c * P_c)


D1_VARIANTS = ("derived", "as-printed")


def _variant(variant: str, derived: int) -> int:
    if variant not in D1_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(D1_VARIANTS)}")
    return derived if variant == "derived" else -derived


def d1_from_pprime(P_c, Pp, t_c, variant: str = "derived"):
    """D_1 from P(t_c) and P'(t_c).

    ``as-printed``: -2^(3/4) t_c^(3/2) sqrt(P^(3/2) + sqrt(P t_c)(1 - sqrt t_c) P').
    ``derived``: the same with the P' term subtracted, which is what the
    expansion of the square root in the D-from-P relation gives (see
    :func:`d1_from_radicand`).
    """
    sign = _variant(variant, -1)
    return -mpmath.mpf(2) ** mpmath.mpf(0.75) * t_c ** mpmath.mpf(1.5) * mpmath.sqrt(
        P_c ** mpmath.mpf(1.5) + sign * mpmath.sqrt(P_c * t_c) * (1 - mpmath.sqrt(t_c)) * Pp)


def d1_from_radicand(c0, c1, t_c):
    """-t_c sqrt(q_1) / 2, with q_1 the linear coefficient of the radicand in (1 - t/t_c).

    No simplification through the critical-point identity is used.
    """
    t = t_c
    q1 = (-4 * c1 + 8 * c0 * c1 - 16 * c0 * c1 * t + 8 * c0 * c1 * t ** 2 - 4 * c1 * t
          + 8 * c0 ** 2 * t + 4 * c0 * t - 8 * c0 ** 2 * t ** 2)
    return -t * mpmath.sqrt(q1) / 2


def k_D_formula(c0, c1, t_c, variant: str = "derived"):
    """k_D = -t_c sqrt((2 c0)^(3/2) t_c -/+ 2 c1 sqrt t_c); ``as-printed`` takes the minus sign."""
    sign = _variant(variant, 1)
    return -t_c * mpmath.sqrt((2 * c0) ** mpmath.mpf(1.5) * t_c + sign * 2 * c1 * mpmath.sqrt(t_c))


def k_alpha_formula(c0, c1, c_alpha, t_c, variant: str = "derived"):
    """k_alpha = -t_c^(3/2) c_alpha / sqrt((2 c0)^(3/2) t_c -/+ 2 c1 sqrt t_c)."""
    sign = _variant(variant, 1)
    return -t_c ** mpmath.mpf(1.5) * c_alpha / mpmath.sqrt(
        (2 * c0) ** mpmath.mpf(1.5) * t_c + sign * 2 * c1 * mpmath.sqrt(t_c))


def _propagate(fn, t_c, err):
    """Value of fn at t_c with the first-order spread |fn'| err."""
    v = fn(t_c)
    return Estimate(v, abs(fn(t_c + err) - fn(t_c - err)) / 2)


def scaled(coeffs, t_c, precision: int):
    """a_n = f_n t_c^n: the series in s = t/t_c.  ``coeffs`` may be a TruncatedSeries."""
    with mpmath.workdps(precision):
        out, w = [], mpmath.mpf(1)
        for c in getattr(coeffs, "coeffs", coeffs):
            out.append(to_mpf(c, precision) * w)
            w *= t_c
        return out


def sqrt_one_minus(n: int) -> list:
    """Coefficients of sqrt(1 - s) through s^(n-1)."""
    out = [mpmath.mpf(1)]
    for k in range(1, n):
        out.append(out[-1] * (k - mpmath.mpf(1.5)) / k)
    return out


def inv_sqrt_one_minus(n: int) -> list:
    out = [mpmath.mpf(1)]
    for k in range(1, n):
        out.append(out[-1] * (k - mpmath.mpf(0.5)) / k)
    return out


def pprime_derivative_route(P, t_c, precision: int = DEFAULT_PRECISION, blocks=None) -> PadeEstimate:
    """Padé of the termwise derivative sum n p_n t^(n-1), at t_c."""
    with mpmath.workdps(precision):
        a = scaled(P, t_c, precision)
        der = [n * a[n] / t_c for n in range(1, len(a))]
        return pade_estimate(der, 1, precision=precision, blocks=blocks)


def pprime_quotient_route(P, t_c, P_c=None, precision: int = DEFAULT_PRECISION, blocks=None) -> PadeEstimate:
    """Padé of (P(t) - P(t_c)) / (t - t_c), at t_c."""
    with mpmath.workdps(precision):
        P_c = closed_form_P(t_c) if P_c is None else P_c
        a = scaled(P, t_c, precision)
        part, q = -P_c, []
        for x in a:
            part += x
            q.append(-part / t_c)
        return pade_estimate(q, 1, precision=precision, blocks=blocks)


def d1_direct(D, t_c, D_c=None, precision: int = DEFAULT_PRECISION, blocks=None) -> PadeEstimate:
    """Padé of (D(t) - D(t_c)) / sqrt(1 - t/t_c), at t_c."""
    with mpmath.workdps(precision):
        D_c = closed_form_D(t_c) if D_c is None else D_c
        a = scaled(D, t_c, precision)
        a[0] -= D_c
        w = inv_sqrt_one_minus(len(a))
        g = [sum(a[j] * w[n - j] for j in range(n + 1)) for n in range(len(a))]
        return pade_estimate(g, 1, precision=precision, blocks=blocks)


def kappa_extrapolate(coeffs, t_c, g, *, precision: int = DEFAULT_PRECISION, orders=(1, 2, 3, 4),
                      step: int = 10, ends: int = 5, start: int = 1) -> Estimate:
    """Amplitude kappa in f_n ~ kappa t_c^(-n) n^g.

    The sequence f_n t_c^n n^(-g) is extrapolated to 1/n = 0 by Neville's
    scheme on points spaced ``step`` apart; the estimate is the median over
    the polynomial ``orders`` and the last ``ends`` end points, the error
    half the range of those values.
    """
    with mpmath.workdps(precision):
        t_c, g = to_mpf(t_c, precision), to_mpf(g, precision)
        a = scaled(coeffs, t_c, precision)
        seq = {n: a[n] * mpmath.mpf(n) ** (-g) for n in range(max(1, start), len(a))}
        top = len(a) - 1
        vals = []
        for e in range(ends):
            end = top - e
            for k in orders:
                ns = [end - i * step for i in range(k + 1)]
                if ns[-1] < max(1, start):
                    continue
                vals.append(_neville([mpmath.mpf(1) / n for n in ns], [seq[n] for n in ns]))
        if not vals:
            raise ValueError("too few terms for the requested extrapolation")
        vals.sort()
        k = len(vals)
        med = vals[k // 2] if k % 2 else (vals[k // 2 - 1] + vals[k // 2]) / 2
        return Estimate(med, (vals[-1] - vals[0]) / 2)


def _neville(xs, ys, at=0):
    p = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = ((at - xs[i + m]) * p[i] + (xs[i] - at) * p[i + 1]) / (xs[i] - xs[i + m])
    return p[0]


def estimate_constants(P, D, t_c, *, t_c_error=0, alpha=None, precision: int = DEFAULT_PRECISION,
                       blocks=None) -> AsymptoticConstants:
    """Closed forms at t_c, Padé amplitudes, and their cross-checks.

    ``alpha`` (the tsip generating-function exponent, from a DA survey)
    enables Delta = alpha - 1, kappa_p and k_alpha.
    """
    with mpmath.workdps(precision):
        t = mpmath.mpf(t_c)
        err = mpmath.mpf(t_c_error)
        P_c = _propagate(closed_form_P, t, err)
        D_c = _propagate(closed_form_D, t, err)
        pd = pprime_derivative_route(P, t, precision, blocks)
        pq = pprime_quotient_route(P, t, P_c.value, precision, blocks)
        d1 = d1_direct(D, t, D_c.value, precision, blocks)
        pade_P = pade_estimate(scaled(P, t, precision), 1, precision=precision, blocks=blocks)
        Pp = Estimate(pd.value, max(pd.spread, abs(pd.value - pq.value)))
        d1_eq = d1_from_pprime(P_c.value, Pp.value, t)
        d1_eq_err = abs(d1_from_pprime(P_c.value, Pp.value + Pp.error, t) - d1_eq) + \
            abs(d1_from_pprime(closed_form_P(t + err), Pp.value, t + err) - d1_eq)
        c0, c1 = P_c.value, -t * Pp.value
        kD = k_D_formula(c0, c1, t)
        kD_err = abs(k_D_formula(c0, -t * (Pp.value + Pp.error), t) - kD)
        residual = consteqn_residual(pade_P.value, t)
        res_err = abs(consteqn_residual(pade_P.value + pade_P.spread, t) - residual) + \
            abs(consteqn_residual(pade_P.value, t + err) - residual)
        kd = kappa_extrapolate(D, t, -1.5, precision=precision)
        extra = {
            "Pprime_derivative_route": Estimate(pd.value, pd.spread),
            "Pprime_quotient_route": Estimate(pq.value, pq.spread),
            "D1_direct": Estimate(d1.value, d1.spread),
            "D1_from_Pprime": Estimate(d1_eq, d1_eq_err),
            "D1_from_radicand": Estimate(d1_from_radicand(c0, c1, t), d1_eq_err),
            "D1_from_Pprime_as_printed": Estimate(d1_from_pprime(P_c.value, Pp.value, t, "as-printed"), d1_eq_err),
            "k_D_as_printed": Estimate(k_D_formula(c0, c1, t, "as-printed"), kD_err),
            "P_at_tc_pade": Estimate(pade_P.value, pade_P.spread),
            "consteqn_residual": Estimate(residual, res_err),
        }
        delta = kp = None
        if alpha is not None:
            a = mpmath.mpf(alpha)
            delta = Estimate(a - 1, mpmath.mpf(0))
            kp = kappa_extrapolate(P, t, -1 - a, precision=precision)
            c_alpha = kp.value * mpmath.gamma(-a)
            extra["c_alpha"] = Estimate(c_alpha, abs(kp.error * mpmath.gamma(-a)))
            extra["k_alpha"] = Estimate(k_alpha_formula(c0, c1, c_alpha, t),
                                        abs(k_alpha_formula(c0, c1, kp.error * mpmath.gamma(-a), t)))
            extra["k_alpha_as_printed"] = Estimate(k_alpha_formula(c0, c1, c_alpha, t, "as-printed"),
                                                   abs(k_alpha_formula(c0, c1, kp.error * mpmath.gamma(-a), t, "as-printed")))
        return AsymptoticConstants(
            t_c=Estimate(t, err), P_at_tc=P_c, D_at_tc=D_c, Pprime_at_tc=Pp,
            D1_at_tc=Estimate(d1.value, max(d1.spread, abs(d1.value - d1_eq))),
            k_D=Estimate(kD, kD_err), Delta=delta, kappa_d=kd, kappa_p=kp, extra=extra)


def mpf_to_fraction(x) -> Fraction:
    """The exact binary rational held by an mpf."""
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp)) if man else Fraction(0)


@dataclass(frozen=True)
class SubtractionResult:
    theta_ratio: mpmath.mpf
    theta_da: tuple  # exponents found at s = 1 by the DA survey
    remainder: tuple = field(repr=False)


def singular_remainder(D, t_c, D_c, D1, precision: int = DEFAULT_PRECISION) -> list:
    """Coefficients in s = t/t_c of D - D(t_c) - D_1 sqrt(1 - t/t_c)."""
    with mpmath.workdps(precision):
        a = scaled(D, mpmath.mpf(t_c), precision)
        w = sqrt_one_minus(len(a))
        out = [x - mpmath.mpf(D1) * y for x, y in zip(a, w)]
        out[0] -= mpmath.mpf(D_c)
        return out


def subtract_singular_and_reestimate(D, constants: AsymptoticConstants | None = None, *, t_c=None,
                                     D_c=None, D1=None, precision: int = DEFAULT_PRECISION,
                                     tail: int = 40, da_order: int | None = 2, da_choices=None):
    """Exponent of the remainder once the constant and square-root terms are removed.

    The ratio estimate is the biased estimator at the (rescaled) critical
    point 1, extrapolated linearly in 1/n over the last ``tail`` terms;
    the DA estimate runs a survey of order ``da_order`` on the remainder.
    """
    from .da import da_survey, degree_choices
    from .floatseq import FloatSeq
    from .ratio import biased_exponent, linear_extrapolate

    if constants is not None:
        t_c = constants.t_c.value if t_c is None else t_c
        D_c = constants.D_at_tc.value if D_c is None else D_c
        D1 = constants.D1_at_tc.value if D1 is None else D1
    if t_c is None or D_c is None or D1 is None:
        raise ValueError("t_c, D(t_c) and D_1 are required")
    rem = singular_remainder(D, t_c, D_c, D1, precision)
    seq = FloatSeq(tuple(rem), "remainder", precision)
    theta = linear_extrapolate(biased_exponent(seq, 1), tail)
    theta_da = ()
    if da_order:
        exact = [mpf_to_fraction(x) for x in rem]
        choices = da_choices or degree_choices(len(exact), da_order, inhomogeneous=range(0, 10, 3), trims=(0, 3, 6))
        res = da_survey(exact, da_order, choices, precision=precision, window=(0.99, 1.01))
        theta_da = tuple(g.value for g in res.exponents)
    return SubtractionResult(theta, theta_da, tuple(rem))
