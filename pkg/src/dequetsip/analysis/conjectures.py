"""Closed-form conjectures for weighted quarter-plane loops, and the DA study that tests them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .da import SurveyResult, da_survey, degree_choices
from .floatseq import DEFAULT_PRECISION

RASCHEL_VARIANTS = ("a-1/2+2a", "a-1/2+a", "1-a/2+2a", "1-a/2+a")


class DomainError(ValueError):
    pass


def _mp(a):
    a = Fraction(a) if not isinstance(a, mpmath.mpf) else a
    return mpmath.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else a


def rho_Q(a, precision: int = DEFAULT_PRECISION):
    """Conjectured radius of convergence of Q(a, .).

    1/(2 + sqrt(2 + 2a))^2 for a >= -1/2 and -a/(2(a - 1)^2) on [-1, -1/2].
    """
    with mpmath.workdps(precision):
        x = _mp(a)
        if x < -1:
            raise DomainError(f"rho_Q is conjectured for a >= -1 only, got {a}")
        if x >= mpmath.mpf(-1) / 2:
            return 1 / (2 + mpmath.sqrt(2 + 2 * x)) ** 2
        return -x / (2 * (x - 1) ** 2)


def rho_Q_branches(a, precision: int = DEFAULT_PRECISION):
    """Both branch formulas at ``a`` (they agree at a = -1/2)."""
    with mpmath.workdps(precision):
        x = _mp(a)
        return 1 / (2 + mpmath.sqrt(2 + 2 * x)) ** 2, -x / (2 * (x - 1) ** 2)


def raschel_g(a, variant: str = "a-1/2+2a", precision: int = DEFAULT_PRECISION):
    """pi / arccos(num / (a + 1 + sqrt(rad))) for the four candidate forms.

    The variant name is ``<num>/<rad>`` with num in {a-1, 1-a} and rad in
    {2+2a, 2+a}.  Defined for a > -1/2, where the argument lies in (-1, 1].
    """
    if variant not in RASCHEL_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(RASCHEL_VARIANTS)}")
    num_s, rad_s = variant.split("/")
    with mpmath.workdps(precision):
        x = _mp(a)
        if x <= mpmath.mpf(-1) / 2:
            raise DomainError(f"the exponent formula is stated for a > -1/2, got {a}")
        num = x - 1 if num_s == "a-1" else 1 - x
        rad = 2 + 2 * x if rad_s == "2+2a" else 2 + x
        arg = num / (x + 1 + mpmath.sqrt(rad))
        if not -1 <= arg <= 1:
            raise DomainError(f"arccos argument {arg} outside [-1, 1] at a = {a}")
        ang = mpmath.acos(arg)
        if ang == 0:
            raise DomainError(f"exponent diverges at a = {a} for variant {variant}")
        return mpmath.pi / ang


def arccos_branches(precision: int = DEFAULT_PRECISION) -> dict:
    """The two a = 0 candidates: pi/arccos(sqrt2 - 1) and pi/arccos(1 - sqrt2)."""
    with mpmath.workdps(precision):
        r = mpmath.sqrt(2) - 1
        return {"pi/arccos(sqrt2-1)": mpmath.pi / mpmath.acos(r),
                "pi/arccos(1-sqrt2)": mpmath.pi / mpmath.acos(-r)}


def speculation_constant(precision: int = DEFAULT_PRECISION):
    """(2/3)(1 + 2 pi / (3 sqrt 3))."""
    with mpmath.workdps(precision):
        return mpmath.mpf(2) / 3 * (1 + 2 * mpmath.pi / (3 * mpmath.sqrt(3)))


@dataclass(frozen=True)
class ExponentStudy:
    a: Fraction
    terms: int
    u_c: mpmath.mpf | None
    rho_Q: mpmath.mpf | None
    exponent: mpmath.mpf | None
    candidates: dict
    closest: str | None
    surveys: dict = field(default_factory=dict, repr=False)

    def matching(self, tol=1e-9) -> list[str]:
        """Every candidate as close to the measured exponent as the closest one (within ``tol``)."""
        if self.closest is None:
            return []
        best = abs(self.candidates[self.closest] - self.exponent)
        return sorted(k for k, v in self.candidates.items() if abs(v - self.exponent) <= best + tol)

    @property
    def arccos_winner(self) -> str | None:
        """At a = 0, the arccos branch nearer the measured exponent."""
        keys = [k for k in self.candidates if k.startswith("pi/arccos")]
        if self.exponent is None or not keys:
            return None
        return min(keys, key=lambda k: abs(self.candidates[k] - self.exponent))


def adaptive_survey(coeffs, M: int, *, precision: int = DEFAULT_PRECISION, min_fits: int = 10,
                    inhomogeneous=range(0, 11), trims=(0, 2, 4), **kw) -> SurveyResult:
    """A survey over the standard degree choices, shrinking the number of terms used
    while too few fits are non-defective (as happens for holonomic series, where
    oversized approximants are rank deficient)."""
    n = len(coeffs)
    res = None
    while n >= 4 * (M + 1):
        choices = degree_choices(n, M, inhomogeneous=inhomogeneous, trims=trims)
        res = da_survey(coeffs[:n], M, choices, precision=precision, **kw)
        if len(res.fits) >= min(min_fits, len(choices)) and res.location is not None:
            return res
        n = n // 2
    return res


def exponent_study(a, n_max: int, M_list=(3,), *, Q=None, precision: int = DEFAULT_PRECISION,
                   threads: int = 1, progress=None, trims=(0, 2, 4)) -> ExponentStudy:
    """DA surveys of Q(a, u), compared with rho_Q(a) and the exponent formulas.

    ``Q`` may be the already computed series in u; otherwise it is built by
    the scalar loop recurrence.  ``trims`` sets the survey size (eleven
    degree choices per trim).
    """
    from ..loops import q_at

    a = Fraction(a)
    if Q is None:
        Q = q_at(a, n_max, threads=threads, progress=progress)
    coeffs = list(Q.coeffs[:n_max + 1])
    surveys = {M: adaptive_survey(coeffs, M, precision=precision, trims=trims) for M in M_list}
    # the highest order whose survey settled on a singularity
    found = [M for M in M_list if surveys[M] is not None and surveys[M].location is not None]
    best = surveys[found[-1]] if found else None
    u_c = best.location if best is not None else None
    exp = best.exponent if best is not None else None
    try:
        rho = rho_Q(a, precision)
    except DomainError:
        rho = None
    cands = {}
    for v in RASCHEL_VARIANTS:
        try:
            cands[v] = raschel_g(a, v, precision)
        except DomainError:
            pass
    if a == 0:
        cands.update(arccos_branches(precision))
    if a == Fraction(-1, 2):
        cands["3/4"] = mpmath.mpf(3) / 4
    closest = None
    if exp is not None and cands:
        closest = min(cands, key=lambda k: abs(cands[k] - exp))
    return ExponentStudy(a, len(coeffs), u_c, rho, exp, cands, closest, surveys)
