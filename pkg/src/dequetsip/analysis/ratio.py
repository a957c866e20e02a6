"""Ratio-method estimators for f_n ~ A mu^n n^g, equivalently F ~ (1 - z/z_c)^theta.

The exponent estimators below target the generating-function exponent
theta; the coefficient exponent is g = -1 - theta.
"""
from __future__ import annotations

import mpmath

from .floatseq import FloatSeq, as_floatseq

MODES = ("ratios", "biased_exponent", "unbiased_exponent", "hadamard")
MIN_TERMS = 10


def _seq(values: dict[int, object], like: FloatSeq, source: str) -> FloatSeq:
    if not values:
        return FloatSeq((), source, like.precision, 0, ())
    lo, hi = min(values), max(values)
    vals = tuple(values.get(n) for n in range(lo, hi + 1))
    flagged = tuple(n for n in range(lo, hi + 1) if values.get(n) is None)
    return FloatSeq(vals, source, like.precision, lo, flagged)


def ratios(f: FloatSeq) -> FloatSeq:
    """r_n = f_n / f_{n-1}; indices with a zero denominator are flagged."""
    out = {}
    with mpmath.workdps(f.precision):
        for n in f.indices[1:]:
            den, num = f[n - 1], f[n]
            out[n] = None if den is None or num is None or den == 0 else num / den
    return _seq(out, f, f"ratios({f.source})")


def biased_exponent(f: FloatSeq, z_c) -> FloatSeq:
    """theta_n = n (1 - z_c r_n) - 1."""
    r = ratios(f)
    out = {}
    with mpmath.workdps(f.precision):
        z_c = mpmath.mpf(z_c)
        for n in r.indices:
            out[n] = None if r[n] is None else n * (1 - z_c * r[n]) - 1
    return _seq(out, f, f"biased({f.source})")


def unbiased_exponent(f: FloatSeq) -> FloatSeq:
    """theta_n = (t_n - 1) n^2 - 1 with t_n = r_n / r_{n-1}."""
    r = ratios(f)
    out = {}
    with mpmath.workdps(f.precision):
        for n in r.indices[1:]:
            a, b = r[n], r[n - 1]
            out[n] = None if a is None or b is None or b == 0 else (a / b - 1) * n * n - 1
    return _seq(out, f, f"unbiased({f.source})")


def hadamard_quotient(f: FloatSeq, g: FloatSeq) -> FloatSeq:
    out = {}
    with mpmath.workdps(f.precision):
        for n in f.indices:
            if n in g.indices and g[n] is not None and f[n] is not None:
                out[n] = None if g[n] == 0 else f[n] / g[n]
    return _seq(out, f, f"{f.source}/{g.source}")


def hadamard_exponent(f: FloatSeq, g: FloatSeq) -> FloatSeq:
    """theta_n = n (r_n - 1) for the ratios of q_n = f_n / g_n; tends to g_f - g_g."""
    r = ratios(hadamard_quotient(f, g))
    out = {}
    with mpmath.workdps(f.precision):
        for n in r.indices:
            out[n] = None if r[n] is None else n * (r[n] - 1)
    return _seq(out, f, f"hadamard({f.source},{g.source})")


def local_gradient(g: FloatSeq) -> FloatSeq:
    """h_n = (g_n - g_{n-1}) n (1 - n): the slope of g against 1/n."""
    out = {}
    with mpmath.workdps(g.precision):
        for n in g.indices[1:]:
            a, b = g[n], g[n - 1]
            out[n] = None if a is None or b is None else (a - b) * n * (1 - n)
    return _seq(out, g, f"gradient({g.source})")


def refined_intercept(g: FloatSeq) -> FloatSeq:
    """g_n - h_n / n: where the local tangent against 1/n meets 1/n = 0."""
    h = local_gradient(g)
    out = {}
    with mpmath.workdps(g.precision):
        for n in h.indices:
            out[n] = None if h[n] is None else g[n] - h[n] / n
    return _seq(out, g, f"refined({g.source})")


def ratio_estimators(coeffs, mode: str = "ratios", *, z_c=None, other=None,
                     precision: int | None = None) -> FloatSeq:
    """Dispatch on ``mode``; ``coeffs`` may be exact coefficients or a FloatSeq."""
    kw = {} if precision is None else {"precision": precision}
    f = as_floatseq(coeffs, **kw)
    if len(f) < MIN_TERMS:
        raise ValueError(f"ratio estimators need at least {MIN_TERMS} terms, got {len(f)}")
    if mode == "ratios":
        return ratios(f)
    if mode == "biased_exponent":
        if z_c is None:
            raise ValueError("biased_exponent needs z_c")
        return biased_exponent(f, z_c)
    if mode == "unbiased_exponent":
        return unbiased_exponent(f)
    if mode == "hadamard":
        if other is None:
            raise ValueError("hadamard needs a second sequence")
        return hadamard_exponent(f, as_floatseq(other, **kw))
    raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


def polynomial_extrapolate(seq: FloatSeq, tail: int = 20, degree: int = 1):
    """Least-squares polynomial of ``degree`` in 1/n through the last ``tail`` points; returns its value at 1/n = 0."""
    pts = seq.items()[-tail:]
    if len(pts) <= degree:
        raise ValueError(f"need more than {degree} points")
    with mpmath.workdps(seq.precision):
        n0 = pts[-1][0]
        # x = n0/n stays of order one, which keeps the normal equations well conditioned
        xs = [mpmath.mpf(n0) / n for n, _ in pts]
        A = mpmath.matrix([[x ** j for j in range(degree + 1)] for x in xs])
        b = mpmath.matrix([v for _, v in pts])
        coef, _ = mpmath.qr_solve(A, b)
        return coef[0]


def linear_extrapolate(seq: FloatSeq, tail: int = 20):
    """Least-squares line through the last ``tail`` points against 1/n; returns the intercept."""
    return polynomial_extrapolate(seq, tail, 1)
