"""Differential approximants.

A fit of order M finds polynomials Q_0..Q_M and P with

    sum_k Q_k(z) (z d/dz)^k F(z) = P(z)

matching the known coefficients of F.  The linear system is solved exactly
over the rationals; only the roots of Q_M are floating.  Near a simple root
z_i of Q_M the solutions behave as (1 - z/z_i)^lambda with

    lambda = M - 1 - Q_{M-1}(z_i) / (z_i Q_M'(z_i)).

``INDICIAL_SIGN`` records how this relates to the textbook expression
1 - M + Q_{M-1}/(z Q_M'), which is evaluated as written and then multiplied
by the sign; the (1 - 2z)^(-3/2) calibration in the tests pins it down.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint
import mpmath

from .floatseq import DEFAULT_PRECISION

INDICIAL_SIGN = -1


class DefectiveApproximant(ArithmeticError):
    pass


@dataclass(frozen=True)
class Singularity:
    location: mpmath.mpc
    exponent: mpmath.mpf | mpmath.mpc | None  # None at a multiple root
    multiplicity: int = 1

    @property
    def multiple(self) -> bool:
        return self.multiplicity > 1


@dataclass(frozen=True)
class DAResult:
    order: int
    degrees: tuple[int, ...]  # Q_0..Q_M, then P (-1: homogeneous)
    singularities: tuple[Singularity, ...]
    terms_used: int
    residual_rank_info: dict = field(default_factory=dict)
    polys: tuple = field(default=(), repr=False)


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def unknown_count(degrees: Sequence[int]) -> int:
    """Free coefficients once Q_M(0) = 1 is imposed."""
    return sum(d + 1 for d in degrees) - 1


def fit_da(coeffs, M: int, degrees: Sequence[int], *, precision: int = DEFAULT_PRECISION,
           normalization: str = "QM0") -> DAResult:
    """One exact differential approximant.

    ``degrees`` lists deg Q_0, ..., deg Q_M and optionally deg P (omit or
    pass -1 for a homogeneous equation).  One equation per unknown, taken
    from the lowest coefficients.  ``normalization`` fixes Q_M(0) = 1.
    """
    if hasattr(coeffs, "coeffs") and not isinstance(coeffs, Sequence):
        coeffs = coeffs.coeffs
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) == M + 1:
        degrees = degrees + (-1,)
    if len(degrees) != M + 2 or M < 1 or any(d < 0 for d in degrees[:-1]):
        raise ValueError(f"need M + 1 polynomial degrees (plus an optional inhomogeneous one), got {degrees}")
    if normalization != "QM0":
        raise ValueError(f"unknown normalization {normalization!r}")
    nunk = unknown_count(degrees)
    if len(coeffs) < nunk:
        raise ValueError(f"{nunk} coefficients needed, {len(coeffs)} given")
    f = [_to_fmpq(c) for c in coeffs]
    # columns: (k, j) for Q_k z^j, skipping (M, 0); then P_l
    cols = [(k, j) for k in range(M + 1) for j in range(degrees[k] + 1) if (k, j) != (M, 0)]
    cols += [("P", l) for l in range(degrees[-1] + 1)]
    zero = flint.fmpq(0)
    rows, rhs = [], []
    for n in range(nunk):
        row = []
        for k, j in cols:
            if k == "P":
                row.append(flint.fmpq(-1) if n == j else zero)
            elif n >= j:
                row.append(f[n - j] * (n - j) ** k)
            else:
                row.append(zero)
        rows.append(row)
        rhs.append([-(f[n] * n ** M)])
    A = flint.fmpq_mat(rows)
    try:
        sol = A.solve(flint.fmpq_mat(rhs))
    except ZeroDivisionError:
        raise DefectiveApproximant("defective approximant") from None
    values = [sol[i, 0] for i in range(len(cols))]
    Q = [[zero] * (degrees[k] + 1) for k in range(M + 1)]
    Q[M][0] = flint.fmpq(1)
    Pc = [zero] * (degrees[-1] + 1)
    for (k, j), v in zip(cols, values):
        if k == "P":
            Pc[j] = v
        else:
            Q[k][j] = v
    polys = tuple(flint.fmpq_poly(q) for q in Q) + (flint.fmpq_poly(Pc),)
    top = polys[M]
    if top.degree() < 1:
        raise DefectiveApproximant("defective approximant")
    sings = _singularities(polys[M - 1], top, M, precision)
    info = {"unknowns": nunk, "deg_QM": top.degree(), "extra_matched": _extra_matched(polys, f, nunk)}
    return DAResult(M, degrees, sings, nunk, info, polys)


def _extra_matched(polys, f, start: int) -> int:
    """How many coefficients beyond the fitted ones the equation also reproduces."""
    M = len(polys) - 2
    pc = polys[-1].coeffs()
    count = 0
    for n in range(start, len(f)):
        total = -pc[n] if n < len(pc) else flint.fmpq(0)
        for k in range(M + 1):
            for j, q in enumerate(polys[k].coeffs()):
                if j <= n and q != 0:
                    total += q * f[n - j] * (n - j) ** k
        if total != 0:
            break
        count += 1
    return count


def _acb_to_mpc(z) -> mpmath.mpc:
    digits = mpmath.mp.dps + 5
    return mpmath.mpc(z.real.mid().str(digits, radius=False), z.imag.mid().str(digits, radius=False))


def _singularities(qm1: flint.fmpq_poly, qm: flint.fmpq_poly, M: int, precision: int):
    bits = int(precision * 3.33) + 32
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        roots = qm.complex_roots()
        d = qm.derivative()
        p_low = flint.acb_poly([flint.acb(c) for c in qm1.coeffs()]) if qm1.degree() >= 0 else None
        p_der = flint.acb_poly([flint.acb(c) for c in d.coeffs()])
        out = []
        with mpmath.workdps(precision):
            for z, mult in roots:
                loc = _acb_to_mpc(z)
                if mult > 1:
                    out.append(Singularity(loc, None, mult))
                    continue
                low = p_low(z) if p_low is not None else flint.acb(0)
                raw = 1 - M + low / (z * p_der(z))
                theta = _acb_to_mpc(raw) * INDICIAL_SIGN
                if abs(theta.imag) <= mpmath.mpf(10) ** (-precision // 2) * max(1, abs(theta)):
                    theta = theta.real
                if loc.imag == 0 or abs(loc.imag) <= mpmath.mpf(10) ** (-precision // 2) * abs(loc):
                    loc = mpmath.mpc(loc.real, 0)
                out.append(Singularity(loc, theta, 1))
        out.sort(key=lambda s: (abs(s.location), s.location.imag))
        return tuple(out)
    finally:
        flint.ctx.prec = old


def _mp_poly_taylor(poly: flint.fmpq_poly, at) -> list:
    """Taylor coefficients of ``poly`` about ``at``."""
    c = [mpmath.mpf(int(x.p)) / int(x.q) for x in poly.coeffs()]
    out = []
    k = 0
    while c:
        out.append(mpmath.polyval(c[::-1], at) / mpmath.factorial(k))
        c = [i * c[i] for i in range(1, len(c))]
        k += 1
    return out


def _lam_mul_linear(p: list, root) -> list:
    """(lambda - root) * p, coefficient lists in ascending powers of lambda."""
    out = [mpmath.mpf(0)] * (len(p) + 1)
    for i, x in enumerate(p):
        out[i] -= root * x
        out[i + 1] += x
    return out


def _lam_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _euler_power_terms(k: int, center) -> dict:
    """(z d/dz)^k (z - center)^lambda = sum_i c_i(lambda) (z - center)^(lambda - i)."""
    cur = {0: [mpmath.mpf(1)]}
    for _ in range(k):
        nxt: dict = {}
        for sft, p in cur.items():
            f = _lam_mul_linear(p, sft)
            nxt[sft + 1] = _lam_add(nxt.get(sft + 1, []), [center * x for x in f])
            nxt[sft] = _lam_add(nxt.get(sft, []), f)
        cur = nxt
    return cur


def confluent_exponents(result: DAResult, center, multiplicity: int, *, precision: int = DEFAULT_PRECISION):
    """Exponents of a group of ``multiplicity`` (nearly) coincident roots of Q_M at ``center``.

    The group is treated as a single root of that multiplicity at a regular
    singular point: the Taylor coefficients that would have to vanish there
    are dropped, and the indicial polynomial is formed from the rest.  The
    trivial roots 0, ..., M - m - 1 are divided out.  For multiplicity one
    this is the simple-root formula.
    """
    M, m = result.order, multiplicity
    with mpmath.workdps(precision + 10):
        center = mpmath.mpf(center)
        ind = [mpmath.mpf(0)]
        for k in range(M + 1):
            q = _mp_poly_taylor(result.polys[k], center)
            for i, p in _euler_power_terms(k, center).items():
                l = i + m - M
                if 0 <= l < len(q):
                    ind = _lam_add(ind, [q[l] * x for x in p])
        for j in range(M - m):
            # synthetic division by (lambda - j)
            desc = ind[::-1]
            acc = [desc[0]]
            for c in desc[1:]:
                acc.append(c + acc[-1] * j)
            ind = acc[:-1][::-1]
        while len(ind) > 1 and ind[-1] == 0:
            ind.pop()
        if len(ind) < 2:
            return ()
        roots = mpmath.polyroots(ind[::-1], maxsteps=500, extraprec=4 * precision)
        out = []
        for r in roots:
            r = mpmath.mpc(r)
            out.append(r.real if abs(r.imag) <= mpmath.mpf(10) ** (-precision // 2) * max(1, abs(r)) else r)
        return tuple(sorted(out, key=lambda x: (mpmath.re(x), mpmath.im(x))))


def degree_choices(n_terms: int, M: int, *, inhomogeneous: Iterable[int] = range(0, 11),
                   trims: Iterable[int] = (0, 2, 4), spread: bool = True) -> list[tuple[int, ...]]:
    """Degree vectors for a survey that uses (nearly) all ``n_terms`` coefficients.

    For each inhomogeneous degree L and trim s, the Q_k share the remaining
    equations as evenly as possible (Q_M the highest, when ``spread``).
    """
    out = []
    for s in trims:
        T = n_terms - s
        for L in inhomogeneous:
            free = T + 1 - (L + 1)  # sum over Q_k of (deg + 1)
            base, extra = divmod(free, M + 1)
            if base < 2:
                continue
            degs = [base - 1] * (M + 1)
            order = range(M, M - extra, -1) if spread else range(extra)
            for k in order:
                degs[k] += 1
            cand = tuple(degs) + (L,)
            if unknown_count(cand) <= n_terms and cand not in out:
                out.append(cand)
    return out


@dataclass(frozen=True)
class ExponentGroup:
    value: mpmath.mpf
    spread: mpmath.mpf
    share: float
    samples: int


@dataclass(frozen=True)
class SurveyResult:
    """The dominant singularity shared by most fits, and the exponents found there."""

    location: mpmath.mpf | None
    location_spread: mpmath.mpf | None
    share: float
    exponents: tuple[ExponentGroup, ...]
    fits: tuple[DAResult, ...] = field(repr=False)
    defective: tuple[tuple[int, ...], ...] = ()
    per_fit: tuple = field(default=(), repr=False)  # (degrees, [(centroid, size, exponents)])

    @property
    def exponent(self):
        return self.exponents[0].value if self.exponents else None


def _median(xs):
    xs = sorted(xs)
    k = len(xs)
    return xs[k // 2] if k % 2 else (xs[k // 2 - 1] + xs[k // 2]) / 2


def _single_link(values, tol, relative):
    values = sorted(values, key=lambda v: v[0])
    groups, cur = [], []
    for v in values:
        if cur:
            ref = cur[-1][0]
            gap = abs(v[0] - ref)
            if gap > (tol * abs(ref) if relative else tol):
                groups.append(cur)
                cur = []
        cur.append(v)
    if cur:
        groups.append(cur)
    return groups


def da_survey(coeffs, M: int, choices: Sequence[Sequence[int]] | None = None, *,
              precision: int = DEFAULT_PRECISION, tol: float = 1e-4, min_share: float = 0.7,
              confluence_tol: float = 1e-7, exponent_tol: float = 0.05, window=None) -> SurveyResult:
    """Fit every degree choice and cluster the positive real roots.

    Roots within relative ``tol`` are grouped across fits; the cluster of
    smallest modulus present in at least ``min_share`` of the non-defective
    fits is the dominant singularity, located at the median of its roots.
    Inside each fit, roots of that cluster closer than ``confluence_tol``
    (relative) are read as one confluent singularity and their exponents
    come from its indicial polynomial.  Exponent values are then grouped
    within ``exponent_tol`` and the groups seen in at least ``min_share`` of
    the fits are reported in increasing order.  ``window`` = (lo, hi)
    restricts the candidate roots.
    """
    if hasattr(coeffs, "coeffs") and not isinstance(coeffs, Sequence):
        coeffs = coeffs.coeffs
    coeffs = list(coeffs)
    if choices is None:
        choices = degree_choices(len(coeffs), M)
    fits, bad = [], []
    for degs in choices:
        try:
            fits.append(fit_da(coeffs, M, degs, precision=precision))
        except DefectiveApproximant:
            bad.append(tuple(degs))
    if not fits:
        return SurveyResult(None, None, 0.0, (), (), tuple(bad))
    cands = []
    with mpmath.workdps(precision):
        for i, fit in enumerate(fits):
            for s in fit.singularities:
                z = s.location
                if z.real <= 0 or abs(z.imag) > tol * abs(z):
                    continue
                if window is not None and not (window[0] <= z.real <= window[1]):
                    continue
                cands.append((z.real, i, s))
        chosen = None
        for cl in _single_link(cands, tol, relative=True):
            share = len({i for _, i, _ in cl}) / len(fits)
            if share >= min_share:
                chosen = (cl, share)
                break
        if chosen is None:
            return SurveyResult(None, None, 0.0, (), tuple(fits), tuple(bad))
        cl, share = chosen
        locs = [x for x, _, _ in cl]
        loc = _median(locs)
        spread = max(abs(x - loc) for x in locs)
        exps, per_fit = [], []
        for i, fit in enumerate(fits):
            mine = [(x, s) for x, j, s in cl if j == i]
            groups = []
            for g in _single_link(mine, confluence_tol, relative=True):
                size = sum(s.multiplicity for _, s in g)
                centre = sum(x for x, _ in g) / len(g)
                if size == 1:
                    vals = (g[0][1].exponent,)
                else:
                    vals = confluent_exponents(fit, centre, size, precision=precision)
                vals = tuple(v for v in vals if v is not None and not isinstance(v, mpmath.mpc))
                groups.append((centre, size, vals))
                exps.extend((v, i) for v in vals)
            per_fit.append((fit.degrees, groups))
        egroups = []
        for g in _single_link(exps, exponent_tol, relative=False):
            gshare = len({i for _, i in g}) / len(fits)
            if gshare >= min_share:
                vals = [v for v, _ in g]
                med = _median(vals)
                egroups.append(ExponentGroup(med, max(abs(v - med) for v in vals), gshare, len(vals)))
        return SurveyResult(loc, spread, share, tuple(egroups), tuple(fits), tuple(bad), tuple(per_fit))
