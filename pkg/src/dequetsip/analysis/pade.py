"""Float Padé evaluation of a series at a point on (or near) its circle of convergence."""
from __future__ import annotations

from dataclasses import dataclass

import flint
import mpmath


@dataclass(frozen=True)
class PadeEstimate:
    value: mpmath.mpf
    spread: mpmath.mpf
    samples: tuple


def _arb(x) -> flint.arb:
    return flint.arb(mpmath.nstr(x, mpmath.mp.dps + 5, strip_zeros=False)) if not isinstance(x, flint.arb) else x


def _solve_block(c, L: int, M: int, at: flint.arb):
    """[L/M] via the Toeplitz denominator system, in ball arithmetic."""
    def coef(i):
        return c[i] if i >= 0 else flint.arb(0)
    A = flint.arb_mat([[coef(L + i - j) for j in range(1, M + 1)] for i in range(1, M + 1)])
    b = flint.arb_mat([[-coef(L + i)] for i in range(1, M + 1)])
    q = [flint.arb(1)] + [x for x in A.solve(b, algorithm="approx").entries()]
    p = [sum((q[j] * coef(i - j) for j in range(min(i, M) + 1)), flint.arb(0)) for i in range(L + 1)]
    num = sum((p[i] * at ** i for i in range(L + 1)), flint.arb(0))
    den = sum((q[j] * at ** j for j in range(M + 1)), flint.arb(0))
    return num / den


def pade_values(coeffs, at, blocks, precision: int):
    """Evaluate the [L/M] approximants in ``blocks`` at ``at``; degenerate blocks are skipped."""
    vals = []
    old = flint.ctx.prec
    flint.ctx.prec = int(precision * 6.66) + 64
    try:
        with mpmath.workdps(precision):
            c = [_arb(x) for x in coeffs]
            z = _arb(mpmath.mpf(at))
            for L, M in blocks:
                if L + M + 1 > len(c):
                    continue
                try:
                    v = _solve_block(c, L, M, z)
                except ZeroDivisionError:
                    continue
                if not v.is_finite():
                    continue
                vals.append(((L, M), mpmath.mpf(v.mid().str(precision + 5, radius=False))))
    finally:
        flint.ctx.prec = old
    return vals


def near_diagonal(n_terms: int, count: int = 10, offsets=(-2, -1, 0, 1, 2)):
    """Blocks [L/M] with L - M in ``offsets``, using the top ``count`` sizes that fit."""
    out = []
    for total in range(n_terms, 0, -1):
        for d in offsets:
            if (total - 1 - d) % 2:
                continue
            M = (total - 1 - d) // 2
            L = M + d
            if L >= 0 and M >= 1:
                out.append((L, M))
        if len(out) >= count * len(offsets) // 2:
            break
    return out


def _median_spread(vals):
    xs = sorted(v for _, v in vals)
    k = len(xs)
    med = xs[k // 2] if k % 2 else (xs[k // 2 - 1] + xs[k // 2]) / 2
    return med, max(abs(x - med) for x in xs)


def pade_estimate(coeffs, at, *, precision: int, blocks=None, degrade: int = 3,
                  convergence: bool = True) -> PadeEstimate:
    """Median of the near-diagonal approximants at ``at``.

    The spread is the larger of the scatter among the blocks and, with
    ``convergence``, the shift of the median when only half the terms are
    used: at a branch point the blocks agree with each other long before
    they agree with the limit.  When every block is degenerate, smaller
    blocks are tried (``degrade`` times).
    """
    n = len(coeffs)
    for _ in range(degrade + 1):
        bl = blocks if blocks is not None else near_diagonal(n)
        vals = pade_values(coeffs, at, bl, precision)
        if vals:
            break
        blocks, n = None, (n * 3) // 4
    else:
        raise ArithmeticError("every Padé block was degenerate")
    with mpmath.workdps(precision):
        med, spread = _median_spread(vals)
        if convergence and blocks is None:
            half = pade_values(coeffs, at, near_diagonal(n // 2), precision)
            if half:
                spread = max(spread, abs(_median_spread(half)[0] - med))
        return PadeEstimate(med, spread, tuple(vals))
